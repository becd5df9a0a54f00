import dataclasses

import pytest

from secantcert.certify444 import check_equations_444, decide_444
from secantcert.generators import (
    block_diag_334,
    diagonal_family,
    embed,
    generic_tensor,
    random_rank_r,
    rank_l_case2,
    salmon_counterexample,
)
from secantcert.replay import CHECKERS, replay_reason, replay_verdict
from secantcert.secant import decide_rank_l
from secantcert.strassen import decide_333_br3, decide_333_br4
from secantcert.symmetrize import decide_334
from secantcert.verdict import Reason

CASES = [
    (decide_333_br3, random_rank_r(3, 3, 3, 3, 1).tensor),
    (decide_333_br3, generic_tensor(3, 3, 3, 1)),
    (decide_333_br4, random_rank_r(3, 3, 3, 4, 1).tensor),
    (decide_333_br4, generic_tensor(3, 3, 3, 2, bound=9)),
    (decide_334, random_rank_r(3, 3, 4, 4, 1).tensor),
    (decide_334, block_diag_334(1)),
    (lambda t: decide_444(t).verdict, random_rank_r(4, 4, 4, 4, 1).tensor),
    (lambda t: decide_444(t).verdict, salmon_counterexample(1)),
    (lambda t: decide_444(t).verdict, embed(random_rank_r(3, 3, 3, 3, 2).tensor, 4, 4, 4)),
    (lambda t: check_equations_444(t, trials=3), generic_tensor(4, 4, 4, 1)),
    (decide_rank_l, diagonal_family(3).tensor),
    (decide_rank_l, rank_l_case2(4).tensor),
    (decide_rank_l, generic_tensor(4, 4, 4, 3)),
]


@pytest.mark.parametrize("decide,t", CASES)
def test_every_verdict_replays(decide, t):
    assert replay_verdict(t, decide(t))


def test_tampered_reasons_fail_replay():
    t = salmon_counterexample(2)
    v = decide_444(t).verdict
    failing = next(r for r in v.reasons if not r.holds)
    assert replay_reason(t, failing)
    assert not replay_reason(t, dataclasses.replace(failing, holds=True))
    r4 = decide_333_br4(generic_tensor(3, 3, 3, 5, bound=9)).reasons[0]
    assert not replay_reason(generic_tensor(3, 3, 3, 5, bound=9), dataclasses.replace(r4, data={"det_CR": 0}))


def test_unknown_condition():
    with pytest.raises(KeyError):
        replay_reason(generic_tensor(3, 3, 3, 0), Reason("nonsense", True))
    assert "span_commutation" in CHECKERS

import math

import numpy as np
import pytest

from regret_ultimatum.engine import delta_R, max_delta_R_over_p
from regret_ultimatum.mini import (
    Winner,
    classify_two_offer,
    critical_probability,
    eu_two_offer_winner,
    hetero_thresholds,
    kappa,
    kappa_difference,
    optimize_proposer_two,
    responder_p0_bound,
    superfair_pi_c,
)
from regret_ultimatum.model import DegenerateGameError, GameSpec, RegretSpec, UtilitySpec

PI_C_CURVES = [(8.1, 2.0), (8.1, 3.0), (7.1, 4.0), (8.1, 4.0), (8.1, 4.5)]


def two(a0, a1, beta, total=10.0, u1=None, u2=None):
    u1 = u1 or UtilitySpec.linear()
    return GameSpec(total, (a0, a1), RegretSpec.sinh(beta), u1, u2 or u1)


def random_two(rng, total=10.0):
    a1 = rng.uniform(0.02, 0.97) * total
    a0 = rng.uniform(a1 + 0.005 * total, 0.995 * total)
    return two(a0, a1, rng.uniform(0.5, 30), total)


def test_kappa_degenerate_is_zero():
    assert kappa(two(5.0, 5.0, 1.0)) == 0.0


def test_kappa_forms_agree():
    g = two(8.1, 4.0, 1.0)
    assert kappa(g) == pytest.approx(kappa_difference(g), rel=1e-9)
    assert kappa(g) > 0


def test_kappa_identity_random(rng):
    for _ in range(1000):
        g = random_two(rng)
        k = kappa(g)
        assert k > 0
        assert kappa_difference(g) == pytest.approx(k, rel=1e-9)


def test_kappa_needs_two_offers():
    with pytest.raises(ValueError):
        kappa(GameSpec(100, (90, 60, 40), RegretSpec.sinh(1)))


def test_classify_responder_wins_above_half():
    v = classify_two_offer(two(80.0, 60.0, 10.0, total=100.0))
    assert v.winner is Winner.RESPONDER_WINS
    assert v.pi_c < 0
    assert 0 < v.p0_bound < 1


@pytest.mark.parametrize("a0,a1", [(55.0, 40.0), (60.0, 30.0), (90.0, 5.0)])
def test_classify_proposer_always_wins(a0, a1):
    v = classify_two_offer(two(a0, a1, 10.0, total=100.0))
    assert v.winner is Winner.PROPOSER_ALWAYS_WINS
    assert v.pi_c >= 1


def test_fair_split_boundary_gives_pi_c_one():
    assert critical_probability(two(70.0, 30.0, 5.0, total=100.0)) == pytest.approx(1.0, abs=1e-12)


def test_largest_a1_has_lowest_pi_c():
    for beta in (1.0, 5.0, 15.0):
        vals = [critical_probability(two(a0, a1, beta)) for a0, a1 in PI_C_CURVES]
        assert vals[-1] == min(vals)


def test_classify_rejects_invalid_order():
    with pytest.raises(ValueError):
        classify_two_offer(two(4.0, 7.0, 1.0))


def test_linear_regret_classification():
    lin = lambda a0, a1: GameSpec(100, (a0, a1), RegretSpec.linear())  # noqa: E731
    assert classify_two_offer(lin(70, 40)).winner is Winner.RESPONDER_WINS
    v = classify_two_offer(lin(55, 40))
    assert v.winner is Winner.PROPOSER_ALWAYS_WINS and v.pi_c == math.inf
    with pytest.raises(DegenerateGameError):
        classify_two_offer(lin(60, 40))


def test_eu_two_offer_winner():
    lin = lambda a0, a1: GameSpec(100, (a0, a1), RegretSpec.linear())  # noqa: E731
    assert eu_two_offer_winner(lin(70, 40)) is Winner.RESPONDER_WINS
    assert eu_two_offer_winner(lin(55, 40)) is Winner.PROPOSER_WINS
    assert eu_two_offer_winner(lin(60, 40)) is Winner.TIE


def _responder_wins_instances(rng, count):
    out = []
    while len(out) < count:
        g = random_two(rng, total=10.0)
        if classify_two_offer(g).winner is Winner.RESPONDER_WINS:
            out.append(g)
    return out


def test_p0_bound_separates(rng):
    # below the bound the proposer regrets more for every positive weight on a_0;
    # above it some small weight lets the proposer escape
    for g in _responder_wins_instances(rng, 100):
        bound = responder_p0_bound(g)
        assert 0 < bound < 1
        p_lo = 0.99 * bound
        for pi0 in (0.25, 0.5, 0.75, 1.0):
            assert delta_R(g, (pi0, 1 - pi0), (p_lo, 1)).delta > 0
        assert float(delta_R(g, (0.0, 1.0), (p_lo, 1)).delta) == 0.0
        p_hi = bound + 0.01 * (1 - bound)
        probes = np.concatenate([np.arange(0.001, 1.0001, 0.001), 10.0 ** -np.arange(4, 13)])
        assert any(delta_R(g, (x, 1 - x), (p_hi, 1)).delta < 0 for x in probes)


def test_p0_bound_requires_responder_win():
    with pytest.raises(ValueError):
        responder_p0_bound(two(55.0, 40.0, 10.0, total=100.0))


def test_pi_c_brackets_engine_sign(rng):
    seen = 0
    while seen < 500:
        g = random_two(rng)
        pc = critical_probability(g)
        if not 1e-3 < pc < 1 - 1e-3:
            continue
        seen += 1
        below, _ = max_delta_R_over_p(g, (pc - 1e-4, 1 - pc + 1e-4))
        above, _ = max_delta_R_over_p(g, (pc + 1e-4, 1 - pc - 1e-4))
        assert below < 0
        assert above >= 0


def test_pi_c_monotone_in_beta_curves():
    betas = np.linspace(0.5, 30, 50)
    for a0, a1 in PI_C_CURVES:
        vals = [critical_probability(two(a0, a1, b)) for b in betas]
        assert np.all(np.diff(vals) <= 0)


def test_scale_identity(rng):
    for _ in range(500):
        g = random_two(rng)
        c = rng.uniform(0.1, 10)
        a0, a1 = g.offers
        big = GameSpec(c * g.total, (c * a0, c * a1), g.regret)
        small_beta = g.with_regret(RegretSpec.sinh(g.regret.beta / c))
        x, y = critical_probability(big), critical_probability(small_beta)
        assert x == pytest.approx(y, rel=1e-9, abs=1e-9)
        same = GameSpec(c * g.total, (c * a0, c * a1), RegretSpec.sinh(c * g.regret.beta))
        assert critical_probability(same) == pytest.approx(critical_probability(g), rel=1e-9, abs=1e-9)


def test_hetero_thresholds():
    log = UtilitySpec.log
    g = GameSpec(90, (70, 20), RegretSpec.sinh(5), log(1.0), log(2.0))
    assert hetero_thresholds(g)[0] == 90 / 3
    g = GameSpec(90, (70, 20), RegretSpec.sinh(5), log(2.0), log(1.0))
    assert hetero_thresholds(g)[0] == pytest.approx(60)
    g = GameSpec(100, (70, 20), RegretSpec.sinh(5), log(3.0), log(3.0))
    assert hetero_thresholds(g) == pytest.approx((50, 30))
    with pytest.raises(ValueError):
        hetero_thresholds(GameSpec(100, (70, 20), RegretSpec.sinh(5)))


def test_hetero_thresholds_match_verdicts():
    log = UtilitySpec.log
    base = GameSpec(100, (90, 30), RegretSpec.sinh(5), log(1.0), log(2.0))
    first, second = hetero_thresholds(base)
    assert classify_two_offer(base.with_offers((90, first + 1))).winner is Winner.RESPONDER_WINS
    # the expected-utility limit splits exactly at the second threshold
    for a1, expected in ((second - 1, Winner.PROPOSER_WINS), (second + 1, Winner.RESPONDER_WINS)):
        g = GameSpec(100, (90, a1), RegretSpec.linear(), log(1.0), log(2.0))
        assert eu_two_offer_winner(g) is expected


def test_superfair():
    log = UtilitySpec.log
    g = GameSpec(100, (70, 30), RegretSpec.sinh(5), log(1.0), log(4.0))
    pc = superfair_pi_c(g)
    assert pc < 1
    assert pc == pytest.approx(classify_two_offer(g).pi_c, rel=1e-9)
    eq = GameSpec(100, (70, 30), RegretSpec.sinh(5), log(2.0), log(2.0))
    assert superfair_pi_c(eq, check=False) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        superfair_pi_c(eq)


@pytest.mark.parametrize(
    "a1,value,a0",
    [(0.49, 0.523509, 0.701289), (0.4, 0.797194, 0.907669), (0.35, 0.877306, 0.942645)],
)
def test_optimize_two_reference_values(a1, value, a0):
    opt = optimize_proposer_two(GameSpec(1, (1 - a1, a1), RegretSpec.sinh(0.1)), a1)
    assert opt.value == pytest.approx(value, abs=1e-5)
    assert opt.a0_star == pytest.approx(a0, abs=2e-5)
    assert opt.open_boundary
    assert opt.pi_star == pytest.approx(critical_probability(GameSpec(1, (opt.a0_star, a1), RegretSpec.sinh(0.1))))


@pytest.mark.parametrize("a1", [0.05, 0.2, 0.35, 0.45, 0.49])
def test_optimize_two_beta_one_stays_at_fair_split(a1):
    opt = optimize_proposer_two(GameSpec(1, (1 - a1, a1), RegretSpec.sinh(1.0)), a1)
    assert opt.a0_star == pytest.approx(1 - a1, abs=1e-6)
    assert opt.value == pytest.approx(1 - a1, abs=1e-6)


@pytest.mark.parametrize("a1", [10.0, 30.0, 45.0])
def test_optimize_two_eu_limit(a1):
    opt = optimize_proposer_two(GameSpec(100, (100 - a1, a1), RegretSpec.sinh(1e3 * 100)), a1)
    assert opt.a0_star == pytest.approx(100 - a1, abs=1e-3)


def test_optimize_two_rejects_fair_or_more():
    with pytest.raises(ValueError):
        optimize_proposer_two(GameSpec(1, (0.6, 0.5), RegretSpec.sinh(0.1)), 0.5)


def test_huge_stakes_classification():
    # sinh(1000) overflows float64; the verdict must still come out
    v = classify_two_offer(GameSpec(100, (90, 30), RegretSpec.sinh(0.07)))
    assert v.winner is not None
    assert math.isfinite(v.pi_c) or v.pi_c == -math.inf

import numpy as np
import pytest

from regret_ultimatum.model import GameSpec, RegretSpec, UtilitySpec


def lottery_regret(g, winners, p_win, losers, p_lose):
    """Mean of g[u(x) - u(y)] over independent x ~ first lottery, y ~ second.

    Equals rho(first; second) - rho(second; first) for any regret split f
    with g[x] = f[x] - f[-x]; independent of the closed-form engine.
    """
    diff = np.subtract.outer(np.asarray(winners, float), np.asarray(losers, float))
    return float(np.asarray(p_win) @ g(diff) @ np.asarray(p_lose))


def lottery_oracle(game: GameSpec, pi, p):
    """(responder functional, proposer functional) built from the lotteries."""
    pi, p = np.asarray(pi, float), np.asarray(p, float)
    g = lambda x: np.vectorize(game.regret, otypes=[float])(x) if x.size else x  # noqa: E731
    u2 = game.responder_utilities()
    u1 = game.proposer_utilities()
    acc = p * pi
    rej_probs = np.append(acc, 1.0 - acc.sum())
    rho2 = lottery_regret(g, u2, pi, np.append(u2, 0.0), rej_probs)
    rho1 = lottery_regret(g, [u1[-1]], [1.0], np.append(u1, 0.0), rej_probs)
    return rho2, rho1


def random_offers(rng, total, size):
    while True:
        offers = np.sort(rng.uniform(0.02 * total, 0.98 * total, size))[::-1]
        if np.all(np.diff(offers) < -1e-3 * total):
            return tuple(float(a) for a in offers)


def random_utility(rng):
    if rng.random() < 0.5:
        return UtilitySpec.linear()
    return UtilitySpec.log(float(rng.uniform(0.5, 50)))


def random_game(rng, total=100.0, max_size=5, regret=None, hetero=True):
    size = int(rng.integers(2, max_size + 1))
    if regret is None:
        regret = RegretSpec.sinh(float(rng.uniform(5, 100))) if rng.random() < 0.7 else RegretSpec.linear()
    u1 = random_utility(rng)
    u2 = random_utility(rng) if hetero else u1
    return GameSpec(total, random_offers(rng, total, size), regret, u1, u2)


def random_pi(rng, size, full_support=False):
    pi = rng.dirichlet(np.ones(size))
    if full_support:
        pi = np.maximum(pi, 1e-3)
        pi /= pi.sum()
    return pi


def random_p(rng, size):
    p = np.sort(rng.uniform(0, 1, size))
    p[-1] = 1.0
    return p


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def game_70_40():
    return GameSpec(100, (70, 40), RegretSpec.linear())


_CRITERIA: dict[int, dict] = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marker = getattr(report, "criterion", None)
    if marker is None:
        return
    number, title = marker
    entry = _CRITERIA.setdefault(number, {"title": title, "ok": True, "count": 0})
    entry["count"] += 1
    entry["ok"] &= report.outcome == "passed"


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        outcome.get_result().criterion = tuple(marker.args)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        entry = _CRITERIA[number]
        status = "PASS" if entry["ok"] else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {status}  {entry['title']} ({entry['count']} checks)")

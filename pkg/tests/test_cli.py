import csv
import io
import json

import pytest

from regret_ultimatum.cli import main
from regret_ultimatum.mini import critical_probability
from regret_ultimatum.model import GameSpec, RegretSpec, UtilitySpec


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def record(text):
    return dict(line.split(": ", 1) for line in text.strip().splitlines())


def rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_classify_responder_wins_in_eu_limit():
    code, out, _ = run("classify", "--A", "100", "--offers", "70,40")
    assert code == 0
    assert record(out)["winner"] == "ResponderWins"


def test_classify_sinh_gives_proposer_a_window():
    # with a_1 below A/2 the proposer keeps winning mixes once regret is nonlinear
    code, out, _ = run("classify", "--A", "100", "--offers", "70,40", "--beta", "10")
    assert code == 0
    rec = record(out)
    assert rec["winner"] == "ProposerWinsWithBound"
    assert float(rec["pi_c"]) == pytest.approx(0.90493, abs=1e-5)


def test_classify_matches_library_pi_c():
    code, out, _ = run("classify", "--A", "10", "--offers", "8.1,4", "--beta", "5", "--u", "linear", "--json")
    assert code == 0
    data = json.loads(out)
    expected = critical_probability(GameSpec(10, (8.1, 4), RegretSpec.sinh(5)))
    assert data["pi_c"] == pytest.approx(expected, rel=1e-12)


def test_classify_bad_order_exit_2():
    code, _, err = run("classify", "--A", "100", "--offers", "40,70", "--beta", "10")
    assert code == 2
    assert "decreasing" in err or "order" in err


def test_optimize_two():
    code, out, _ = run("optimize", "--mode", "two", "--A", "1", "--beta", "0.1", "--a1", "0.4", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["value"] == pytest.approx(0.797194, abs=1e-5)
    assert data["a0"] == pytest.approx(0.907669, abs=2e-5)


def test_optimize_tilde():
    code, out, _ = run("optimize", "--mode", "tilde", "--A", "100", "--a0", "70", "--a2", "46", "--beta", "16")
    assert code == 0
    assert float(record(out)["value"]) == pytest.approx(55.6, abs=0.05)


def test_optimize_u1():
    code, out, _ = run("optimize", "--mode", "u1", "--A", "100", "--a2", "47", "--beta", "17", "--json")
    assert code == 0
    assert json.loads(out)["value"] == pytest.approx(53.24, abs=0.05)


def test_optimize_infeasible_exit_3():
    code, _, err = run("optimize", "--mode", "u1", "--A", "100", "--a2", "98.5", "--beta", "1",
                       "--offer-step", "0.5")
    assert code == 3
    assert "infeasible" in err


def test_table1():
    code, out, _ = run("table1")
    assert code == 0
    table = {r[0]: r[1:] for r in rows(out)[1:]}
    for got, ref in zip(table["U1"], (53.24, 55.36, 54.04, 62.6, 59.24)):
        assert float(got) == pytest.approx(ref, abs=0.05)
    for got, ref in zip(table["U2_tilde"], (53.44, 55.6, 54.3, 62.8, 59.46)):
        assert float(got) == pytest.approx(ref, abs=0.05)
    assert table["sandwich"] == ["TRUE"] * 5


def test_domain_coarse_grid():
    code, out, _ = run("domain", "--A", "100", "--offers", "90,60,40", "--beta", "10", "--grid-step", "0.5")
    assert code == 0
    data = rows(out)
    assert data[0] == ["pi_0", "pi_1", "pi_2", "in_domain"]
    assert len(data) == 7


def test_domain_empty_two_offer():
    code, out, _ = run("domain", "--A", "100", "--offers", "96,45", "--beta", "10", "--grid-step", "0.05")
    assert code == 0
    assert {r[-1] for r in rows(out)[1:]} == {"0"}


def test_domain_bad_grid_exit_2():
    code, _, _ = run("domain", "--A", "100", "--offers", "90,60,40", "--beta", "10", "--grid-step", "0.7")
    assert code == 2


def test_domain_counts_shrink(tmp_path):
    counts = []
    for beta in ("1", "10", "30"):
        path = tmp_path / f"domain_{beta}.csv"
        assert run("domain", "--A", "100", "--offers", "90,60,40", "--beta", beta, "--out", str(path))[0] == 0
        counts.append(sum(r[-1] == "1" for r in rows(path.read_text())[1:]))
    assert counts[0] >= counts[1] >= counts[2] > 0


def test_scan_pic_rows_and_determinism():
    args = ("scan-pic", "--A", "10", "--offers", "8.1,4", "--betas", "0.5:30:0.5")
    code, first, _ = run(*args)
    assert code == 0
    data = rows(first)
    assert data[0] == ["beta", "pi_c", "regime"]
    assert len(data) == 61
    pcs = [float(r[1]) for r in data[1:]]
    assert all(b <= a for a, b in zip(pcs, pcs[1:]))
    assert run(*args)[1] == first


def test_scan_pic_single_beta():
    code, out, _ = run("scan-pic", "--A", "10", "--offers", "8.1,4", "--betas", "5")
    assert code == 0 and len(rows(out)) == 2


def test_scan_pic_flags_proposer_always_wins():
    code, out, _ = run("scan-pic", "--A", "100", "--offers", "55,40", "--betas", "1,10,100")
    assert code == 0
    assert {r[2] for r in rows(out)[1:]} == {"ProposerAlwaysWins"}


def test_spec_file_roundtrip(tmp_path):
    game = GameSpec(100, (70, 40), RegretSpec.sinh(10), UtilitySpec.log(5.0), UtilitySpec.log(10.0))
    path = tmp_path / "game.json"
    path.write_text(game.to_json())
    assert GameSpec.from_json(path.read_text()) == game
    code, out, _ = run("classify", "--spec", str(path), "--json")
    assert code == 0
    assert json.loads(out)["winner"] == "ResponderWins"


def test_json_output_file(tmp_path):
    path = tmp_path / "pic.json"
    code, _, _ = run("scan-pic", "--A", "10", "--offers", "8.1,4", "--betas", "1,2", "--out", str(path))
    assert code == 0
    data = json.loads(path.read_text())
    assert [d["beta"] for d in data] == [1.0, 2.0]


def test_format_extension_mismatch(tmp_path):
    code, _, err = run("scan-pic", "--A", "10", "--offers", "8.1,4", "--betas", "1",
                       "--out", str(tmp_path / "x.csv"), "--format", "json")
    assert code == 2
    assert "extension" in err


def test_properties_deterministic():
    a = run("properties", "--seed", "3", "--count", "20")
    b = run("properties", "--seed", "3", "--count", "20")
    assert a[0] == 0 and a[1] == b[1]
    assert all(r[-1] == "TRUE" for r in rows(a[1])[1:])


def test_csv_rows_match_library():
    _, out, _ = run("scan-pic", "--A", "10", "--offers", "7.1,4", "--betas", "1,7,13")
    for beta, pc, _ in rows(out)[1:]:
        direct = critical_probability(GameSpec(10, (7.1, 4), RegretSpec.sinh(float(beta))))
        assert float(pc) == pytest.approx(direct, rel=1e-5)

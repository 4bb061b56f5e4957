import io
import json

import pytest

from homhopf import cli, serialize
from homhopf.catalog import INSTANCES, build_instance, cyclic_automorphism, cyclic_twist, group_algebra, perturb
from homhopf.exactlin import GF, QQ

from oracle import classical_yd_checks

F = GF(10007)

EMIT_PARAMS = {
    "group_algebra": ["n=3"], "cyclic_twist": ["n=5", "k=2"], "sweedler": [], "sweedler_twist": ["c=2"],
    "regular_module": ["base=cyclic_twist:n=3,k=2", "side=left"], "regular_comodule": [],
    "regular_bicovariant": [], "trivial_yd": ["base=group_algebra:n=2"], "graded_yd": ["n=2", "d=1", "chi=-1"],
}


def run(*argv):
    out = io.StringIO()
    code = cli.main(list(argv), stdout=out)
    return code, out.getvalue()


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return str(p)


def emit(name, *params, field="q"):
    code, text = run("catalog", "emit", name, *params, "--field", field)
    assert code == 0
    return text


@pytest.mark.parametrize("field", ["q", "fp:10007"])
@pytest.mark.parametrize("name", sorted(INSTANCES))
def test_round_trip_byte_identical(name, field):
    text = emit(name, *EMIT_PARAMS[name], field=field)
    again = serialize.emit(serialize.loads(text))
    assert again == text
    assert serialize.emit(serialize.loads(again)) == text


def test_catalog_list():
    code, text = run("catalog", "list")
    assert code == 0
    assert {line.split("\t")[0] for line in text.splitlines()} == set(INSTANCES)


# one fixture per exit code

def test_exit_0_verify_kc2(tmp_path):
    p = write(tmp_path, "kc2.json", emit("group_algebra", "n=2"))
    code, text = run("verify", p)
    assert code == 0
    assert text.rstrip().endswith("verdict\tpass")


def test_exit_1_verify_perturbed(tmp_path):
    bad = perturb(group_algebra(2), "mul", 1, 1)
    p = write(tmp_path, "bad.json", serialize.emit(bad))
    code, text = run("verify", p, "--out", "json")
    assert code == 1
    doc = json.loads(text)
    assert doc["verdict"] == "fail"
    failed = [c for c in doc["checks"] if c["status"] == "fail"]
    assert failed and all("witness" in c for c in failed)


def test_exit_2_truncated(tmp_path):
    text = emit("group_algebra", "n=2")
    p = write(tmp_path, "cut.json", text[: len(text) // 2])
    code, _ = run("verify", p)
    assert code == 2


@pytest.mark.parametrize("mutate", [
    lambda d: d.update(dim=3),
    lambda d: d.update(extra="x"),
    lambda d: d.update(field="Fp:10"),
    lambda d: d.update(format_version=99),
    lambda d: d["unit"].__setitem__(0, 1),
    lambda d: d["unit"].__setitem__(0, "1/0"),
], ids=["shape", "unknown-field", "bad-prime", "version", "non-string-scalar", "bad-scalar"])
def test_exit_2_malformed(tmp_path, mutate):
    doc = json.loads(emit("group_algebra", "n=2"))
    mutate(doc)
    p = write(tmp_path, "m.json", json.dumps(doc))
    assert run("verify", p)[0] == 2


def test_exit_2_usage_and_field_mismatch(tmp_path):
    p = write(tmp_path, "kc2.json", emit("group_algebra", "n=2"))
    assert run("verify", p, "--field", "fp:10007")[0] == 2
    assert run("verify", p, "--field", "q")[0] == 0
    assert run("verify")[0] == 2
    assert run("verify", str(tmp_path / "missing.json"))[0] == 2
    assert run("catalog", "emit", "group_algebra", "n3")[0] == 2
    assert run("catalog", "emit", "cyclic_twist", "n=4", "k=2")[0] == 2


def test_sweedler_twist_end_to_end(tmp_path):
    p = write(tmp_path, "sw.json", emit("sweedler_twist", "c=2"))
    assert run("verify", p)[0] == 0
    pf = write(tmp_path, "swf.json", emit("sweedler_twist", "c=2", field="fp:10007"))
    assert run("verify", pf, "--field", "fp:10007")[0] == 0


def test_reports_are_byte_stable(tmp_path):
    p = write(tmp_path, "sw.json", emit("sweedler_twist", "c=2"))
    a = run("verify", p, "--out", "json", "--seed", "3")[1]
    b = run("verify", p, "--out", "json", "--seed", "3")[1]
    assert a == b
    doc = json.loads(a)
    assert list(doc)[:4] == ["format_version", "tool", "tool_version", "command"]
    assert doc["seed"] == 3 and doc["field"] == "Q"
    assert doc["inputs"] == [serialize.digest(open(p, encoding="utf-8").read())]
    text = run("verify", p, "--seed", "3")[1]
    assert "# seed\t3" in text and "# field\tQ" in text


def test_twist_command(tmp_path):
    h = write(tmp_path, "g3.json", emit("group_algebra", "n=3"))
    aut = write(tmp_path, "aut.json", serialize.dumps(cli.automorphism_document(cyclic_automorphism(3, 2))))
    out = tmp_path / "t.json"
    code, _ = run("twist", h, "--aut", aut, "--emit", str(out))
    assert code == 0
    assert serialize.loads(out.read_text()).mul == cyclic_twist(3, 2).mul
    # a non-unital automorphism is refused with a failing check
    from homhopf.exactlin import Matrix
    swap = Matrix(QQ, QQ.array([[0, 1, 0], [1, 0, 0], [0, 0, 1]]))
    bad = write(tmp_path, "bad.json", serialize.dumps(cli.automorphism_document(swap)))
    assert run("twist", h, "--aut", bad)[0] == 1


def test_coinv_and_tensor_h(tmp_path):
    r = write(tmp_path, "r.json", emit("regular_bicovariant", "base=sweedler_twist:c=2"))
    code, text = run("coinv", r, "--out", "json")
    assert code == 0 and json.loads(text)["data"]["coinvariant_dim"] == 1
    assert run("coinv", r, "--side", "right")[0] == 0
    out = tmp_path / "rr.json"
    code, text = run("tensor-h", r, r, "--emit", str(out), "--out", "json")
    assert code == 0 and json.loads(text)["data"]["dim_tensor"] == 4
    assert run("verify", str(out))[0] == 0


def test_braid_check_and_figures(tmp_path):
    r = write(tmp_path, "r.json", emit("regular_bicovariant", "base=group_algebra:n=2"))
    fig = tmp_path / "c.png"
    code, _ = run("braid-check", r, r, "--figure", str(fig))
    assert code == 0 and fig.stat().st_size > 0
    s = write(tmp_path, "s.json", emit("graded_yd", "n=2", "d=1", "chi=-1"))
    t = write(tmp_path, "t.json", emit("trivial_yd", "base=group_algebra:n=2"))
    code, _ = run("braid-check", s, t, "--third", s, "--category", "yd")
    assert code == 0
    chart = tmp_path / "v.png"
    assert run("yd-check", s, "--figure", str(chart))[0] == 0
    assert chart.read_bytes()[:4] == b"\x89PNG"


def test_prebraided_status(tmp_path, monkeypatch):
    """A verified finite-dimensional Hopf algebra always has invertible S, so the
    singular case is simulated at the capability probe."""
    r = write(tmp_path, "r.json", emit("regular_bicovariant", "base=group_algebra:n=2"))
    monkeypatch.setattr(cli, "_singular", lambda h: True)
    code, text = run("braid-check", r, r)
    assert code == 0 and text.rstrip().endswith(cli.PREBRAIDED)
    assert run("braid-check", r, r, "--strict")[0] == 1


def test_equivalence_check_trivial(tmp_path):
    t = write(tmp_path, "t.json", emit("trivial_yd", "base=sweedler_twist:c=2"))
    code, text = run("equivalence-check", t, t, "--out", "json")
    assert code == 0
    doc = json.loads(text)
    assert doc["verdict"] == "pass"
    assert doc["data"]["dim_tensor_over_H"] == 4
    names = [c["name"] for c in doc["checks"]]
    assert "braided equivalence" in names


def test_fuzz_reproducible():
    a = run("fuzz", "--family", "cyclic_twist", "--trials", "25", "--seed", "7", "--out", "json")
    b = run("fuzz", "--family", "cyclic_twist", "--trials", "25", "--seed", "7", "--out", "json")
    assert a == b and a[0] == 0
    records = json.loads(a[1])["data"]["records"]
    assert len(records) == 25 and [r["trial"] for r in records] == list(range(25))
    assert all(r["exit_class"] == 1 for r in records)
    c = run("fuzz", "--family", "cyclic_twist", "--trials", "25", "--seed", "8", "--out", "json")
    assert json.loads(c[1])["data"]["records"] != records


@pytest.mark.parametrize("family", cli.FUZZ_FAMILIES)
def test_fuzz_families(family):
    records = cli.fuzz_trials(family, {}, QQ, 1, 6)
    assert len(records) == 6
    base = build_instance(family, {**cli._FUZZ_DEFAULTS.get(family, {})}, QQ)
    for r in records:
        if r["failures"]:
            continue
        # a shift can land on another valid module (chi = -1 + 2 on kC2); the oracle must agree
        bad = perturb(base, r["tensor"], r["index"], QQ(r["delta"]))
        assert family in ("graded_yd", "trivial_yd") and bad.over.alpha == bad.over.id
        assert all(classical_yd_checks(bad).values())


def test_fuzz_prime_field():
    records = cli.fuzz_trials("sweedler_twist", {}, F, 5, 5)
    assert all(1 <= int(r["delta"]) < 10007 and r["exit_class"] == 1 for r in records)


def test_unverified_input_is_exit_1(tmp_path):
    bad = perturb(build_instance("regular_bicovariant", {"base": "group_algebra:n=2"}), "left_action", 1, 1)
    p = write(tmp_path, "b.json", serialize.emit(bad))
    assert run("coinv", p)[0] == 1
    assert run("tensor-h", p, p)[0] == 1

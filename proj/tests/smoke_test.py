"""Python smoke tests for the _residua extension module."""
import _residua

A1 = """
[datum]
type = A1
lattice = Q

[parameters]
labels = 1 1

[normalization]
constant = 1
vexp = 0
"""

DSC = A1.replace("type = A1", "type = D3").replace("labels = 1 1", "labels = 1 1 1 1") + """
[stm]
recipe = identity
"""

CSC = """
[datum]
type = C3
lattice = basis
basis = [[1,0,0],[0,1,0],[0,1,1]]

[parameters]
labels = 1 1 0 1

[normalization]
constant = 1
vexp = 0
"""


def test_fdeg():
    degs = _residua.formal_degrees(A1, v0="2")
    assert len(degs) == 1
    assert degs[0]["certified"]
    assert degs[0]["certificate"] == "-(v-v^-1) * [2]^-1"
    assert degs[0]["value_at_v0"] == "-3/5"
    assert degs[0]["order_at_1"] == 1


def test_residual_points():
    orbits = _residua.residual_point_orbits(A1)
    assert len(orbits) == 1
    assert orbits[0]["orbit_size"] == 2


def test_run_reports():
    out = _residua.run("residual-cosets", [A1])
    assert out["exit_code"] == 0
    rep = out["report"]
    assert rep["schema"] == "residua/1"
    assert len(rep["orbits"]) == 2

    code, text = _residua.run_text("verify-stm", [DSC, CSC])
    assert code == 0, text
    assert "VALID, a = 1" in text


def test_roundtrip():
    canon = _residua.canonical_document(A1)
    assert _residua.canonical_document(canon) == canon


if __name__ == "__main__":
    test_fdeg()
    test_residual_points()
    test_run_reports()
    test_roundtrip()
    print("smoke tests passed")

import json
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kippenhahn.cli import main
from kippenhahn.figures import M1, M3
from kippenhahn.matrix_io import (
    InputError,
    MatrixInput,
    curves_csv,
    input_to_dict,
    parse_input,
    read_curves_csv,
    serialize_input,
)
from kippenhahn.numerical_range import kippenhahn_components


def dense_json(M):
    M = np.asarray(M, dtype=complex)
    return json.dumps({"dense": {"n": M.shape[0], "entries": [[z.real, z.imag] for z in M.ravel()]}})


@pytest.fixture
def write(tmp_path):
    def _write(obj, name="input.json"):
        p = tmp_path / name
        p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
        return str(p)
    return _write


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# parsing

finite = st.floats(-1e6, 1e6, allow_nan=False)
pairs = st.tuples(finite, finite).map(list)


@settings(max_examples=40, deadline=None)
@given(data=st.one_of(
    st.integers(1, 4).flatmap(lambda n: st.fixed_dictionaries(
        {"dense": st.fixed_dictionaries({"n": st.just(n), "entries": st.lists(pairs, min_size=n * n, max_size=n * n)})})),
    st.fixed_dictionaries({"tridiag2p": st.fixed_dictionaries(
        {"n": st.integers(2, 9), **{k: pairs for k in ("a1", "a2", "b1", "c1", "b2", "c2")}})}),
    st.fixed_dictionaries({"reciprocal": st.fixed_dictionaries(
        {"n": st.integers(2, 9), "a1": st.floats(0.01, 100), "a2": st.floats(0.01, 100)})}),
    st.fixed_dictionaries({"normal": st.fixed_dictionaries({"eigenvalues": st.lists(pairs, min_size=1, max_size=6)})}),
))
def test_round_trip(data):
    inp = parse_input(json.dumps(data))
    assert parse_input(serialize_input(inp)) == inp
    assert parse_input(json.dumps(input_to_dict(inp))) == inp


def test_parse_variants():
    inp = parse_input(dense_json(M1))
    assert inp.kind == "dense" and np.array_equal(inp.matrix(), M1)
    rec = parse_input('{"reciprocal": {"n": 6, "A1": 1.25, "A2": 1.5}}')
    assert np.isclose(rec.reciprocal.A2, 1.5)
    nrm = parse_input('{"normal": [[1, 0], [0, 1]]}')
    assert nrm.eigenvalues == (1, 1j)
    assert np.array_equal(nrm.matrix(), np.diag([1, 1j]))


@pytest.mark.parametrize("text, where", [
    ('{"dense": {"n": 2, "entries": [[1, 0]]}}', "dense.entries"),
    ('{"dense": {"n": 0, "entries": []}}', "dense.n"),
    ('{"tridiag2p": {"n": 4, "a1": [0, 0], "a2": [0, 0], "b1": 1, "c1": [1, 0], "b2": [1, 0], "c2": [1, 0]}}',
     "tridiag2p.b1"),
    ('{"reciprocal": {"n": 4, "a1": -2, "a2": 1}}', "reciprocal.a1"),
    ('{"reciprocal": {"n": 4, "A1": 0.5, "A2": 1}}', "reciprocal.A1"),
    ('{"normal": {"eigenvalues": [[1, "x"]]}}', "normal.eigenvalues[0]"),
    ('{"dense": {}, "normal": []}', "exactly one"),
    ('{"sparse": {}}', "unknown key"),
    ('[1, 2]', "top level"),
])
def test_parse_errors_name_the_field(text, where):
    with pytest.raises(InputError, match=where.replace("[", r"\[").replace("]", r"\]")):
        parse_input(text)


def test_parse_error_line_and_column():
    with pytest.raises(InputError, match="line 2, column"):
        parse_input('{\n "dense": }')


def test_csv_round_trip_is_exact():
    comps = kippenhahn_components(M3, [1, 2], 64)
    rows = read_curves_csv(curves_csv(comps))
    assert len(rows) == 128
    pts = np.array([z for _, _, z in rows])
    assert np.array_equal(pts, np.concatenate([c.points for c in comps]))


# commands

def test_range_m1_empty(capsys, write):
    code, out, _ = run(capsys, "range", "--input", write(dense_json(M1)), "--k", "2")
    assert code == 0 and json.loads(out) == {"kind": "empty"}


def test_range_reciprocal_point(capsys, write):
    path = write({"reciprocal": {"n": 5, "a1": 2, "a2": 1.05}})
    code, out, _ = run(capsys, "range", "--input", path, "--k", "3")
    assert code == 0 and json.loads(out) == {"kind": "point", "center": [0.0, 0.0]}


def test_range_normal_square(capsys, write):
    path = write({"normal": [[1, 0], [0, 1], [-1, 0], [0, -1]]})
    code, out, _ = run(capsys, "range", "--input", path, "--k", "2")
    assert code == 0 and json.loads(out) == {"kind": "point", "center": [0.0, 0.0]}


def test_range_all_and_svg(capsys, write):
    path = write(dense_json(M3))
    code, out, _ = run(capsys, "range", "--input", path, "--samples", "128")
    regions = json.loads(out)["regions"]
    assert [r["k"] for r in regions] == [1, 2, 3, 4, 5]
    assert regions[0]["kind"] == "polygon" and regions[2]["kind"] == "empty"
    code, out, _ = run(capsys, "range", "--input", path, "--samples", "128", "--format", "svg")
    assert code == 0 and out.startswith("<?xml") and "Lambda_1" in out


def test_curve_csv(capsys, write):
    code, out, _ = run(capsys, "curve", "--input", write(dense_json(M3)), "--samples", "64")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "theta,k,re,im"
    assert len(lines) == 1 + 3 * 64
    assert {int(line.split(",")[1]) for line in lines[1:]} == {1, 2, 3}


def test_curve_svg_with_ellipses(capsys, write):
    path = write({"reciprocal": {"n": 7, "A1": 2, "A2": 1.5}})
    code, out, _ = run(capsys, "curve", "--input", path, "--format", "svg", "--ellipses")
    assert code == 0
    assert out.count("stroke-dasharray") >= 2  # fitted overlay plus its legend entry
    for k in (1, 2, 3, 4):
        assert f"gamma_{k}" in out


def test_curve_json(capsys, write):
    code, out, _ = run(capsys, "curve", "--input", write(dense_json(M1)), "--samples", "32",
                       "--format", "json", "--k", "2")
    comp = json.loads(out)["components"][0]
    assert comp["k"] == 2 and len(comp["points"]) == 32


def test_exit_code_invalid_input(capsys, write):
    code, _, err = run(capsys, "range", "--input", write('{"dense": {"n": 2}}'))
    assert code == 2 and "dense.entries" in err
    code, _, _ = run(capsys, "range", "--input", write(dense_json(M1)), "--k", "9")
    assert code == 2
    code, _, _ = run(capsys, "range", "--input", "/nonexistent/file.json")
    assert code == 2
    code, _, _ = run(capsys, "range", "--input", write(dense_json(M1)), "--samples", "4")
    assert code == 2
    code, _, _ = run(capsys, "range", "--input", write(dense_json(M1)), "--tol", "-1")
    assert code == 2


def test_exit_code_non_generic(capsys, write):
    code, _, err = run(capsys, "curve", "--input", write(dense_json(np.diag([1, 1j, -1]))))
    assert code == 3 and "theta" in err
    code, _, _ = run(capsys, "probe-conjecture", "--input", write({"reciprocal": {"n": 4, "a1": 1, "a2": 2}}))
    assert code == 3


def test_unwritable_out_path(capsys, write, tmp_path):
    target = tmp_path / "missing-dir" / "out.json"
    code, _, err = run(capsys, "range", "--input", write(dense_json(M1)), "--out", str(target))
    assert code == 1 and "cannot write" in err


def test_figures_target_is_a_file(capsys, tmp_path):
    blocker = tmp_path / "blocker"
    blocker.write_text("")
    code, _, err = run(capsys, "figures", "--out", str(blocker), "--samples", "64")
    assert code == 1 and "cannot write" in err


def test_check_reciprocal(capsys, write):
    code, out, _ = run(capsys, "check", "--input", write({"reciprocal": {"n": 6, "A1": 1.05, "A2": 1.62}}),
                       "--format", "json")
    rep = json.loads(out)
    assert code == 0 and rep["ok"]
    assert rep["checks"]["+-sqrt(zeta_k) vs dense eigensolver"]["pass"]
    assert rep["checks"]["generic"]["detail"].startswith("True")


def test_check_m3(capsys, write):
    code, out, _ = run(capsys, "check", "--input", write(dense_json(M3)))
    assert code == 0
    assert "[INFO] generic: True" in out
    assert "[INFO] Lambda_3: empty" in out


def test_check_balanced_tridiagonal_warns(capsys, write):
    body = {"n": 5, "a1": [0, 0], "a2": [0, 0], "b1": [1, 0], "c1": [1, 0], "b2": [2, 0], "c2": [0.5, 0]}
    code, out, _ = run(capsys, "check", "--input", write({"tridiag2p": body}))
    assert "[WARN] balanced pair" in out
    assert code in (0, 1)


def test_check_normal(capsys, write):
    code, out, _ = run(capsys, "check", "--input", write({"normal": [[1, 0], [0, 1], [-1, 0], [0, -1.5]]}))
    assert code == 0
    assert "Lambda_2: subset hulls vs half-planes" in out


def test_probe(capsys, write):
    code, out, _ = run(capsys, "probe-conjecture", "--input", write({"reciprocal": {"n": 6, "A1": 1.25, "A2": 1.5}}),
                       "--format", "json")
    res = json.loads(out)["residuals"]
    assert code == 0 and set(res) == {"1", "2", "3"}
    code, _, _ = run(capsys, "probe-conjecture", "--input", write({"reciprocal": {"n": 5, "A1": 1.25, "A2": 1.5}}))
    assert code == 2


def test_output_determinism(capsys, write, tmp_path):
    path = write(dense_json(M3))
    outs = []
    for i in range(2):
        target = tmp_path / f"curve{i}.csv"
        assert run(capsys, "curve", "--input", path, "--out", str(target))[0] == 0
        outs.append(target.read_bytes())
    assert outs[0] == outs[1]


def test_from_matrix_round_trip():
    inp = MatrixInput.from_matrix(M3)
    assert parse_input(serialize_input(inp)) == inp
    assert inp.two_periodic() is None

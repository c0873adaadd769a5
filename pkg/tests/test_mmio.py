import numpy as np
import pytest
import scipy.io
from hypothesis import given
from hypothesis import strategies as st

from relbound.errors import ParseError, SymmetryViolation
from relbound.harness.generators import make_rng
from relbound.harness.mmio import read_matrix, write_matrix

from conftest import random_dense, random_hermitian, seeds


def test_identity_round_trip(tmp_path):
    write_matrix(tmp_path / "i.mtx", np.eye(3))
    M = read_matrix(tmp_path / "i.mtx")
    assert M.dtype == np.float64 and np.array_equal(M, np.eye(3))


def test_coordinate_two_entries(tmp_path):
    p = tmp_path / "c.mtx"
    p.write_text("%%MatrixMarket matrix coordinate real general\n% comment\n3 3 2\n1 2 5.5\n3 1 -2\n")
    want = np.zeros((3, 3))
    want[0, 1], want[2, 0] = 5.5, -2.0
    assert np.array_equal(read_matrix(p), want)


def test_hermitian_stores_lower_triangle(tmp_path):
    H = random_hermitian(4, 1)
    p = tmp_path / "h.mtx"
    write_matrix(p, H)
    lines = p.read_text().splitlines()
    assert lines[0] == "%%MatrixMarket matrix array complex hermitian"
    assert len(lines) == 2 + 10
    assert np.array_equal(read_matrix(p), H)


def _draw(kind, m, n, seed):
    rng = make_rng(seed, 77)
    if kind == "real":
        return rng.standard_normal((m, n)) * 10.0 ** rng.uniform(-300, 300, (m, n))
    if kind == "complex":
        return random_dense(m, n, seed) * 10.0 ** rng.uniform(-20, 20)
    if kind == "symmetric":
        X = rng.standard_normal((n, n))
        return X + X.T
    if kind == "skew":
        X = rng.standard_normal((n, n))
        return X - X.T
    return random_hermitian(n, seed, 10.0 ** rng.uniform(-5, 5))


def test_fuzz_round_trip_bit_identical(tmp_path):
    kinds = ("real", "complex", "symmetric", "skew", "hermitian")
    for t in range(100):
        rng = make_rng(t, 78)
        m, n = (int(x) for x in rng.integers(1, 9, 2))
        kind = kinds[t % len(kinds)]
        M = _draw(kind, m, n, t)
        if t % 7 == 0:
            mask = rng.uniform(size=M.shape) < 0.4
            M[(mask | mask.T) if kind in ("symmetric", "skew", "hermitian") else mask] = 0
        layout = "coordinate" if t % 2 else "array"
        sym = "skew-symmetric" if kind == "skew" else "auto"
        p = tmp_path / f"{t}.mtx"
        write_matrix(p, M, layout=layout, symmetry=sym)
        assert np.array_equal(read_matrix(p), M), (t, kind, layout)


@given(st.integers(1, 6), st.integers(1, 6), seeds, st.sampled_from(["array", "coordinate"]))
def test_scipy_reads_what_we_write(m, n, seed, layout):
    import tempfile
    from pathlib import Path

    M = random_dense(m, n, seed)
    with tempfile.TemporaryDirectory() as d:
        p = Path(d) / "x.mtx"
        write_matrix(p, M, layout=layout)
        theirs = scipy.io.mmread(str(p))
        theirs = theirs.toarray() if hasattr(theirs, "toarray") else theirs
        assert np.array_equal(theirs, M)


@pytest.mark.parametrize("kind", ["real", "symmetric", "hermitian"])
def test_we_read_what_scipy_writes(tmp_path, kind):
    M = _draw(kind, 5, 5, 3)
    p = tmp_path / "s.mtx"
    scipy.io.mmwrite(str(p), M, precision=17)
    assert np.array_equal(read_matrix(p), M)


@pytest.mark.parametrize(
    "text, line, col",
    [
        ("%%MatrixMarket matrix array real general\n2 2\n1\n2\nx\n4\n", 5, 1),
        ("%%MatrixMarket matrix array real general\n2 two\n", 2, 3),
        ("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 3 1.0\n", 3, 3),
        ("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n", 4, 1),
        ("%%MatrixMarket matrix array real general\n1 1\n1.0 2.0\n", 3, 5),
        ("%%MatrixMarket matrix cube real general\n1 1\n1\n", 1, 23),
        ("%MatrixMarket matrix array real general\n1 1\n1\n", 1, 1),
        ("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n1 1 2.0\n", 4, 1),
    ],
)
def test_parse_error_positions(tmp_path, text, line, col):
    p = tmp_path / "bad.mtx"
    p.write_text(text)
    with pytest.raises(ParseError) as info:
        read_matrix(p)
    assert (info.value.line, info.value.column) == (line, col)


@pytest.mark.parametrize(
    "text",
    [
        "%%MatrixMarket matrix coordinate complex hermitian\n2 2 1\n1 2 1.0 0.5\n",
        "%%MatrixMarket matrix array complex hermitian\n2 2\n1 0.5\n2 0\n3 0\n",
        "%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n1 2 1.0\n",
        "%%MatrixMarket matrix coordinate real skew-symmetric\n2 2 1\n1 1 1.0\n",
    ],
)
def test_symmetry_violation(tmp_path, text):
    p = tmp_path / "bad.mtx"
    p.write_text(text)
    with pytest.raises(SymmetryViolation):
        read_matrix(p)


def test_pattern_and_integer_fields(tmp_path):
    p = tmp_path / "p.mtx"
    p.write_text("%%MatrixMarket matrix coordinate pattern symmetric\n3 3 2\n2 1\n3 3\n")
    assert np.array_equal(read_matrix(p), [[0, 1, 0], [1, 0, 0], [0, 0, 1]])
    p.write_text("%%MatrixMarket matrix array integer general\n1 2\n3\n-4\n")
    assert np.array_equal(read_matrix(p), [[3.0, -4.0]])


def test_write_rejects_bad_requests(tmp_path):
    with pytest.raises(ValueError):
        write_matrix(tmp_path / "x.mtx", np.ones(3))
    with pytest.raises(ValueError):
        write_matrix(tmp_path / "x.mtx", np.ones((2, 3)), symmetry="symmetric")
    with pytest.raises(ValueError):
        write_matrix(tmp_path / "x.mtx", np.eye(2), layout="csr")
    with pytest.raises(ValueError):
        write_matrix(tmp_path / "x.mtx", np.array([[0.0, 1.0], [2.0, 0.0]]), symmetry="skew-symmetric")

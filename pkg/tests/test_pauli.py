import itertools

import numpy as np
import pytest

from stabkit.errors import DimensionError, ParseError
from stabkit.pauli import (PauliOperator, multiply, commutes, gf4_encode, gf4_decode, trace_inner,
                           GF4Vector, gf4_mul, gf4_trace, paulis_of_weight, apply_to_state,
                           lex_digits)
from oracle import pauli_matrix, commute_by_matrix

FIVE = ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]
LETTERS = "IXYZ"


def P(s):
    return PauliOperator.from_string(s)


def test_xz_is_minus_i_y():
    r = multiply(P("X"), P("Z"))
    assert r.letters() == "Y" and r.phase == 3
    assert np.allclose(pauli_matrix("X") @ pauli_matrix("Z"), -1j * pauli_matrix("Y"))


@pytest.mark.parametrize("s", ["X", "Y", "Z"])
def test_involutions(s):
    r = multiply(P(s), P(s))
    assert r.letters() == "I" and r.phase == 0


def test_product_matches_matrix_oracle():
    rng = np.random.default_rng(3)
    for _ in range(200):
        n = int(rng.integers(1, 5))
        a = "".join(rng.choice(list(LETTERS), n))
        b = "".join(rng.choice(list(LETTERS), n))
        r = multiply(P(a), P(b))
        assert np.allclose(pauli_matrix(str(r)), pauli_matrix(a) @ pauli_matrix(b))


def test_five_qubit_rows_multiply_bitwise():
    r = multiply(P(FIVE[0]), P(FIVE[1]))
    assert np.array_equal(r.x, P(FIVE[0]).x ^ P(FIVE[1]).x)
    assert np.array_equal(r.z, P(FIVE[0]).z ^ P(FIVE[1]).z)


def test_inverse_gives_identity():
    for s in ["XYZ", "+iYY", "-ZIX"]:
        p = P(s)
        r = multiply(p, p.adjoint())
        assert r.weight == 0 and r.phase == 0


def test_weight_and_support():
    p = P("XIYZI")
    assert p.weight == 3 and p.support == (0, 2, 3)
    assert p.weight == int(np.count_nonzero(p.x | p.z))


def test_commutation_all_two_qubit_pairs():
    strs = ["".join(t) for t in itertools.product(LETTERS, repeat=2)]
    for a in strs:
        for b in strs:
            assert commutes(P(a), P(b)) == commute_by_matrix(a, b)
    assert not commutes(P("X"), P("Z"))


def test_five_qubit_generators_commute():
    for a, b in itertools.combinations(FIVE, 2):
        assert commutes(P(a), P(b))


def test_length_mismatch_raises():
    with pytest.raises(DimensionError):
        multiply(P("XX"), P("X"))
    with pytest.raises(DimensionError):
        commutes(P("XX"), P("X"))


def test_parse_errors():
    with pytest.raises(ParseError):
        P("XQ")
    assert str(P("-iXY")) == "-iXY"


def test_gf4_encoding_table():
    assert list(gf4_encode(P("IZXY")).entries) == [0, 1, 2, 3]   # 0, 1, w, w^2
    assert not gf4_encode(PauliOperator.identity(4)).entries.any()


def test_gf4_field_identities():
    w, w2 = 2, 3
    assert gf4_mul(w, gf4_mul(w, w)) == 1
    assert w ^ w2 == 1
    assert gf4_trace(0) == gf4_trace(1) == 0 and gf4_trace(w) == gf4_trace(w2) == 1


def test_gf4_round_trip():
    for d in itertools.product(range(4), repeat=3):
        v = GF4Vector(d)
        assert gf4_encode(gf4_decode(v)) == v


def test_trace_inner_vs_commutation():
    for a in LETTERS:
        for b in LETTERS:
            ti = trace_inner(gf4_encode(P(a)), gf4_encode(P(b)))
            assert (ti == 0) == commute_by_matrix(a, b)
    assert trace_inner(GF4Vector([2]), GF4Vector([2])) == 0
    assert trace_inner(GF4Vector([0, 0]), GF4Vector([3, 1])) == 0


def test_five_qubit_gf4_rows_orthogonal():
    rows = [gf4_encode(P(s)) for s in FIVE]
    for u in rows:
        for v in rows:
            assert trace_inner(u, v) == 0


def test_enumeration_counts_and_order():
    assert len(paulis_of_weight(4, 2)) == 9 * 6
    d = lex_digits(3, 1)
    strs = ["".join("IXYZ"[c] for c in row) for row in d]
    assert strs == sorted(strs)


def test_apply_to_state_matches_matrix():
    rng = np.random.default_rng(0)
    psi = rng.normal(size=8) + 1j * rng.normal(size=8)
    for s in ["XYZ", "-iZIX", "IYI"]:
        assert np.allclose(apply_to_state(P(s), psi), pauli_matrix(s) @ psi)

import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from toffbound.circuit import (
    Circuit, CircuitError, CircuitSyntaxError, Cnot, FunctionSpec, Not, Perm1, Perm2, Toffoli,
    apply_to_bits, apply_to_indices, check_injective, inverse, parse_circuit, permutation,
    random_circuit, render_circuit, toffoli_count,
)


def test_parse_examples():
    assert parse_circuit("bits 3\ntoffoli 0 1 2") == Circuit(3, (Toffoli(0, 1, 2),))
    assert parse_circuit("bits 2\ncnot 0 1\nnot 0") == Circuit(2, (Cnot(0, 1), Not(0)))


def test_parse_comments_and_perms():
    c = parse_circuit("# header\nbits 3  # three\n\nperm1 2 1 0\nperm2 0 1 3 2 1 0 # swap-ish\n")
    assert c.gates == (Perm1(2, (1, 0)), Perm2(0, 1, (3, 2, 1, 0)))


@pytest.mark.parametrize("text, line, col", [
    ("bits 2\nperm2 0 1 0 0 1 2", 2, 1),      # non-bijective table
    ("cnot 0 1", 1, 1),                       # missing header
    ("", 1, 1),
    ("bits 2\ncnot 0 2", 2, 1),               # index out of range
    ("bits 2\ncnot 0 x", 2, 8),
    ("bits 3\nfredkin 0 1 2", 2, 1),
    ("bits 3\ntoffoli 0 0 1", 2, 1),
    ("bits 0", 1, 1),
    ("bits 2\nbits 3", 2, 1),
])
def test_parse_errors(text, line, col):
    with pytest.raises(CircuitSyntaxError) as exc:
        parse_circuit(text)
    assert (exc.value.line, exc.value.column) == (line, col)


def test_non_bijective_message():
    with pytest.raises(CircuitError, match="non-bijective"):
        parse_circuit("bits 2\nperm2 0 1 0 0 1 2")


@pytest.mark.parametrize("gates, n, x, y", [
    ((Toffoli(0, 1, 2),), 3, "110", "111"),
    ((Toffoli(0, 1, 2),), 3, "100", "100"),
    ((Cnot(0, 1),), 2, "10", "11"),
    ((Perm2(0, 1, (1, 2, 3, 0)),), 2, "11", "00"),
    ((Perm2(1, 0, (1, 2, 3, 0)),), 2, "10", "01"),  # bit 1 is the high bit: v=1 -> 2
    ((Perm1(0, (1, 0)),), 1, "0", "1"),
])
def test_apply_to_bits(gates, n, x, y):
    assert apply_to_bits(Circuit(n, gates), x) == y


def test_apply_length_mismatch():
    with pytest.raises(CircuitError):
        apply_to_bits(Circuit(3, (Toffoli(0, 1, 2),)), "11")


def test_toffoli_count():
    assert toffoli_count(Circuit(3, (Toffoli(0, 1, 2), Cnot(0, 1), Toffoli(2, 1, 0)))) == 2
    assert toffoli_count(Circuit(3)) == 0
    assert toffoli_count(Circuit(2, (Not(0), Perm2(0, 1, (0, 1, 3, 2))))) == 0


def test_inverse_examples():
    assert inverse(Circuit(3, (Toffoli(0, 1, 2),))).gates == (Toffoli(0, 1, 2),)
    assert inverse(Circuit(2, (Cnot(0, 1), Not(0)))).gates == (Not(0), Cnot(0, 1))
    assert inverse(Circuit(2, (Perm2(0, 1, (1, 2, 3, 0)),))).gates == (Perm2(0, 1, (3, 0, 1, 2)),)


circuits = st.builds(
    lambda n, g, seed: random_circuit(n, g, np.random.default_rng(seed)),
    st.integers(1, 8), st.integers(0, 25), st.integers(0, 2**32 - 1),
)


@given(circuits)
def test_round_trip_inverse(c):
    for bits in itertools.islice(itertools.product("01", repeat=c.n_bits), 64):
        x = "".join(bits)
        assert apply_to_bits(inverse(c), apply_to_bits(c, x)) == x
    assert toffoli_count(inverse(c)) == toffoli_count(c)


@given(circuits)
def test_render_parse_round_trip(c):
    assert parse_circuit(render_circuit(c)) == c


@given(circuits)
def test_bijection_and_vectorised_agree(c):
    perm = permutation(c)
    assert sorted(perm.tolist()) == list(range(1 << c.n_bits))
    for v in range(min(1 << c.n_bits, 32)):
        x = format(v, f"0{c.n_bits}b")
        assert format(int(perm[v]), f"0{c.n_bits}b") == apply_to_bits(c, x)


def test_bijection_n16(rng):
    c = random_circuit(16, 40, rng)
    perm = permutation(c)
    assert len(np.unique(perm)) == 1 << 16


def test_function_spec_callback_and_domain():
    f = FunctionSpec(3, func=lambda v: v ^ 0b001, domain=[0, 2, 4])
    assert f.map_indices([0, 2]).tolist() == [1, 3]
    assert f.in_domain([0, 1]).tolist() == [True, False]
    assert check_injective(f)
    bad = FunctionSpec(2, func=lambda v: 0)
    assert not check_injective(bad)
    with pytest.raises(CircuitError):
        FunctionSpec(3)
    with pytest.raises(CircuitError):
        FunctionSpec(2, circuit=Circuit(3))
    tab = f.tabulated([0, 2, 4])
    assert tab.map_indices([4]).tolist() == [5]


def test_apply_to_indices_matches_strings(rng):
    c = random_circuit(10, 30, rng)
    xs = rng.integers(0, 1 << 10, size=50)
    got = apply_to_indices(c, xs)
    for x, y in zip(xs, got):
        assert apply_to_bits(c, format(int(x), "010b")) == format(int(y), "010b")

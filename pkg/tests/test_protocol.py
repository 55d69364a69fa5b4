import numpy as np
import pytest
from hypothesis import given, strategies as st

from toffbound.circuit import Circuit, Toffoli
from toffbound.logical import apply_circuit, basis_state, from_amplitudes, toffoli_test_state, random_state
from toffbound.protocol import (
    ConstituentRegister, EbitLedger, ProtocolError, apply_gate, basis_register, bilateral_cnot, decode,
    encode, fidelity, nonlocal_toffoli_protocol, register_spectrum, verify_bilateral_cnot,
    verify_nonlocal_toffoli,
)

S = 2 ** -0.5
TOFFOLI = Circuit(3, (Toffoli(0, 1, 2),))


def test_encode_single_pair():
    # index = A + 2B (little endian, A at qubit 0)
    assert np.allclose(encode(basis_state(1, "0")).amps, [S, 0, 0, S])
    assert np.allclose(encode(basis_state(1, "1")).amps, [S, 0, 0, -S])
    assert np.allclose(encode(from_amplitudes(1, [("0", 1), ("1", 1)])).amps, [1, 0, 0, 0])


def test_gates():
    assert np.allclose(apply_gate(basis_register(1, 0), "H", 0).amps, [S, S])
    assert np.allclose(apply_gate(basis_register(1, 1), "H", 0).amps, [S, -S])
    # CNOT control 1, target 0 on |q1=1, q0=0>  ->  |11>
    assert np.allclose(apply_gate(basis_register(2, 0b10), "CNOT", 1, 0).amps, [0, 0, 0, 1])
    assert np.allclose(apply_gate(basis_register(3, 0b011), "TOFFOLI", 0, 1, 2).amps, np.eye(8)[0b111])
    assert np.allclose(apply_gate(basis_register(2, 0b01), "SWAP", 0, 1).amps, [0, 0, 1, 0])
    assert np.allclose(apply_gate(basis_register(2, 0b01), "X", 1).amps, [0, 0, 0, 1])
    with pytest.raises(ProtocolError):
        apply_gate(basis_register(2, 0), "CNOT", 1, 1)
    with pytest.raises(ProtocolError):
        apply_gate(basis_register(2, 0), "H", 2)


@given(st.integers(1, 7), st.integers(0, 2**32 - 1))
def test_decode_encode(n, seed):
    s = random_state(n, np.random.default_rng(seed))
    back, leak = decode(encode(s))
    assert back.allclose(s, atol=1e-12)
    assert abs(leak) <= 1e-12


def test_encode_too_large():
    with pytest.raises(ProtocolError):
        encode(basis_state(8, "0" * 8))


def test_bilateral_cnot_cases():
    got = bilateral_cnot(encode(basis_state(2, "10")), 0, 1)
    assert fidelity(got, encode(basis_state(2, "11"))) == pytest.approx(1, abs=1e-12)
    for b in "01":
        got = bilateral_cnot(encode(basis_state(2, "0" + b)), 0, 1)
        assert fidelity(got, encode(basis_state(2, "0" + b))) == pytest.approx(1, abs=1e-12)
    res = verify_bilateral_cnot(n_random=20)
    assert res.passed and res.cases == 24 and res.worst_fidelity >= 1 - 1e-10


def test_protocol_basis_examples():
    ledger = EbitLedger()
    out = nonlocal_toffoli_protocol(encode(basis_state(3, "110")), ledger)
    assert fidelity(out, encode(basis_state(3, "111"))) >= 1 - 1e-9
    assert ledger.ebits_consumed == 2 and ledger.classical_bits_sent == 4
    for rest in ["00", "01", "10", "11"]:
        s = basis_state(3, "0" + rest)
        assert fidelity(nonlocal_toffoli_protocol(encode(s)), encode(s)) >= 1 - 1e-9


def test_protocol_on_toffoli_test_state_reaches_three_ebits():
    out = nonlocal_toffoli_protocol(encode(toffoli_test_state()))
    assert np.allclose(register_spectrum(out).probs, [0.125] * 8, atol=1e-10)
    assert np.allclose(register_spectrum(encode(toffoli_test_state())).probs,
                       [0.5, 0.125, 0.125, 0.125, 0.125, 0, 0, 0], atol=1e-10)


@given(st.integers(0, 2**32 - 1))
def test_protocol_linearity(seed):
    s = random_state(3, np.random.default_rng(seed))
    ledger = EbitLedger()
    out = nonlocal_toffoli_protocol(encode(s), ledger)
    assert fidelity(out, encode(apply_circuit(s, TOFFOLI))) >= 1 - 1e-9
    assert abs(decode(out)[1]) <= 1e-12
    assert ledger.ebits_consumed == 2


def test_verify_suite_and_mutation():
    assert verify_nonlocal_toffoli().passed
    bad = verify_nonlocal_toffoli(reversed_orientation=True)
    assert not bad.passed and bad.worst_fidelity < 1


def test_protocol_rejects_wrong_register():
    with pytest.raises(ProtocolError):
        nonlocal_toffoli_protocol(encode(basis_state(2, "00")))
    with pytest.raises(ProtocolError):
        ConstituentRegister(2, np.array([1, 1, 0, 0]))


def test_ledger_nonnegative():
    with pytest.raises(ProtocolError):
        EbitLedger().charge(-1, 0, "refund")

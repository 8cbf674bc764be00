"""Circuit IR, reflection wrapper, dense simulation, accounting, export."""

import numpy as np
import pytest
from scipy import stats

from symprep import statevec
from symprep.circuit import (
    Circuit,
    CircuitError,
    GateOp,
    accounting,
    add_reflection_wrapper,
    export_circuit,
    import_circuit,
    prep_circuit,
    simulate,
)
from symprep.disentangler import build_stack
from symprep.mps import apply_two_qubit_gate, mps_from_statevector, to_statevector


def ghz_circuit():
    return Circuit(2, (GateOp("hadamard", (0,)), GateOp("cnot", (0, 1))))


def normal_target(n):
    x = -0.5 + (np.arange(2**n) + 0.5) / 2**n
    f = stats.norm.pdf(x[: 2 ** (n - 1)], 0.0, 0.1)
    p = np.concatenate([f, f[::-1]])
    return p / p.sum()


def half_stack(n_full, num_layers=1):
    p = normal_target(n_full)
    half = p[: 2 ** (n_full - 1)]
    half = half / half.sum()
    m = mps_from_statevector(np.sqrt(half))
    return build_stack(m, num_layers=num_layers)


def test_gateop_validation():
    with pytest.raises(CircuitError):
        GateOp("toffoli", (0, 1))
    with pytest.raises(CircuitError):
        GateOp("cnot", (1, 1))
    with pytest.raises(CircuitError):
        GateOp("hadamard", (0, 1))
    with pytest.raises(CircuitError):
        GateOp("unitary2", (2, 1), np.eye(4))  # wires must be ordered
    with pytest.raises(CircuitError):
        GateOp("unitary2", (0, 1), np.eye(4) * 1.5)  # not orthogonal
    with pytest.raises(CircuitError):
        GateOp("unitary1", (0,), np.eye(4))  # wrong shape
    with pytest.raises(CircuitError):
        Circuit(2, (GateOp("hadamard", (5,)),))  # out of range


def test_simulate_empty_and_ghz():
    empty = Circuit(3, ())
    assert np.array_equal(simulate(empty), statevec.zero_state(3))
    psi = simulate(ghz_circuit())
    expect = np.zeros(4)
    expect[0] = expect[3] = 1.0 / np.sqrt(2.0)
    assert np.allclose(psi, expect, atol=1e-12)


def test_prep_circuit_identity_on_zero():
    m = mps_from_statevector(statevec.zero_state(4))
    stack = build_stack(m, num_layers=1)
    psi = simulate(prep_circuit(stack))
    assert abs(abs(psi[0]) - 1.0) <= 1e-12


def test_prep_circuit_reproduces_ghz():
    v = np.zeros(8)
    v[0] = v[7] = 1.0 / np.sqrt(2.0)
    m = mps_from_statevector(v)
    stack = build_stack(m, num_layers=1)
    psi = simulate(prep_circuit(stack))
    assert np.max(np.abs(np.abs(psi) - np.abs(v))) <= 1e-10
    assert abs(np.abs(np.dot(psi, v)) - 1.0) <= 1e-10


def test_prep_circuit_duality_matches_residual():
    # preparation infidelity equals the stack's residual infidelity
    rng = np.random.default_rng(41)
    v = rng.standard_normal(2**6)
    v /= np.linalg.norm(v)
    m = mps_from_statevector(v, chi_max=4)
    stack = build_stack(m, num_layers=2, chi_work=16)
    psi = simulate(prep_circuit(stack))
    target = to_statevector(m)
    infid = 1.0 - float(np.dot(psi, target)) ** 2
    assert abs(infid - stack.residual_infidelity) <= 1e-10


def test_prep_circuit_gate_count_uniform():
    stack = half_stack(10, num_layers=1)
    c = prep_circuit(stack)
    assert c.n_qubits == 9
    assert len(c.gates) == 9  # n-1 two-qubit gates per layer on the full width
    assert all(g.kind == "unitary2" for g in c.gates)


def test_reflection_wrapper_ghz_from_identity():
    inner = Circuit(2, ())
    wrapped = add_reflection_wrapper(inner)
    assert wrapped.n_qubits == 3
    psi = simulate(wrapped)
    expect = np.zeros(8)
    expect[0] = expect[7] = 1.0 / np.sqrt(2.0)
    assert np.allclose(psi, expect, atol=1e-12)


def test_reflection_wrapper_point_mass():
    # inner |0...0> is a point mass at 0: output uniform over {0, 2^n-1}
    wrapped = add_reflection_wrapper(Circuit(4, ()))
    psi = simulate(wrapped)
    assert abs(psi[0] - 1.0 / np.sqrt(2.0)) <= 1e-12
    assert abs(psi[-1] - 1.0 / np.sqrt(2.0)) <= 1e-12
    assert np.max(np.abs(psi[1:-1])) <= 1e-12


def test_reflection_wrapper_mirror_identity():
    stack = half_stack(8, num_layers=2)
    inner = prep_circuit(stack)
    wrapped = add_reflection_wrapper(inner)
    psi_in = simulate(inner)
    psi = simulate(wrapped)
    half = psi_in.size
    s = 1.0 / np.sqrt(2.0)
    assert np.max(np.abs(psi[:half] - s * psi_in)) <= 1e-12
    assert np.max(np.abs(psi[half:] - s * psi_in[::-1])) <= 1e-12
    # exact mirror symmetry of the squared amplitudes
    p = psi**2
    assert np.max(np.abs(p - p[::-1])) <= 1e-14


def test_reflection_wrapper_needs_two_qubits():
    with pytest.raises(CircuitError):
        add_reflection_wrapper(Circuit(1, ()))


def test_accounting_depth_formulas():
    stack = half_stack(5, num_layers=1)
    c = add_reflection_wrapper(prep_circuit(stack))
    stats5 = accounting(c, num_layers=1, symmetry=True)
    assert stats5.cnot_depth_analytic == 10  # 2(n-2) + (n-1) at n=5
    assert stats5.two_qubit_gate_count == 8  # (n-1) chain gates + (n-1) fan-out
    assert stats5.cnot_count_analytic == 2 * 4 + 4
    assert stats5.total_gate_count == 9  # 4 chain + H + 4 fan-out

    # bare staircase formula without the wrapper
    dummy = Circuit(20, (GateOp("hadamard", (0,)),))
    stats20 = accounting(dummy, num_layers=11, symmetry=False)
    assert stats20.cnot_depth_analytic == 2 * ((20 - 2) + (11 - 1))
    assert stats20.cnot_depth_analytic == 56

    empty = accounting(Circuit(5, ()), num_layers=1, symmetry=True)
    assert (
        empty.cnot_count_analytic
        == empty.cnot_depth_analytic
        == empty.two_qubit_gate_count
        == empty.total_gate_count
        == empty.cnot_depth_counted
        == 0
    )


def test_accounting_counted_depth_ghz():
    stats2 = accounting(ghz_circuit(), num_layers=1, symmetry=False)
    assert stats2.cnot_depth_counted == 1
    assert stats2.two_qubit_gate_count == 1
    assert stats2.cnot_count_analytic == 1


def test_export_json_roundtrip():
    stack = half_stack(6, num_layers=1)
    c = add_reflection_wrapper(prep_circuit(stack))
    doc = export_circuit(c, "json")
    c2 = import_circuit(doc)
    assert c2.n_qubits == c.n_qubits
    assert np.array_equal(simulate(c2), simulate(c))  # 17g entries round-trip


def test_export_qasm_like_ghz():
    text = export_circuit(ghz_circuit(), "qasm_like")
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("//")]
    assert lines == ["h q0", "cx q0,q1"]


def test_export_pipeline_gate_count():
    stack = half_stack(10, num_layers=1)
    c = add_reflection_wrapper(prep_circuit(stack))
    doc = export_circuit(c, "json")
    c2 = import_circuit(doc)
    # n-1 chain gates + 1 hadamard + n-1 fan-out CNOTs at n=10
    assert len(c2.gates) == 9 + 1 + 9
    with pytest.raises(CircuitError):
        export_circuit(c, "pickle")


def test_dense_vs_mps_simulator_agreement():
    rng = np.random.default_rng(42)
    for n in range(3, 7):
        gates = []
        for _ in range(6):
            q = int(rng.integers(0, n - 1))
            g = np.linalg.qr(rng.standard_normal((4, 4)))[0]
            gates.append(GateOp("unitary2", (q, q + 1), g))
        c = Circuit(n, tuple(gates))
        dense = simulate(c)
        m = mps_from_statevector(statevec.zero_state(n))
        for g in gates:
            m = apply_two_qubit_gate(m, g.matrix, g.qubits[0] + 1)
        assert np.max(np.abs(to_statevector(m) - dense)) <= 1e-10, f"n={n}"

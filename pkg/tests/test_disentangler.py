"""Layer extraction, stacking, and the exact chi=2 disentangling theorem."""

import numpy as np
import pytest
from scipy import stats

from symprep import statevec
from symprep.disentangler import (
    DisentanglerError,
    DisentanglerStack,
    _disentangle_dense,
    build_layer,
    build_stack,
    residual,
)
from symprep.mps import mps_from_statevector, to_statevector, truncate


def random_state(rng, n):
    v = rng.standard_normal(2**n)
    return v / np.linalg.norm(v)


def half_normal_amplitudes(n_half=9):
    x = -0.5 + (np.arange(2 ** (n_half + 1)) + 0.5) / 2 ** (n_half + 1)
    f = stats.norm.pdf(x[: 2**n_half], 0.0, 0.1)
    p = f / f.sum()
    return np.sqrt(p)


def ghz(n):
    v = np.zeros(2**n)
    v[0] = v[-1] = 1.0 / np.sqrt(2.0)
    return v


def single_layer_stack(m):
    layer = build_layer(m)
    return DisentanglerStack(layers=(layer,), n_qubits=m.n_qubits, residual_infidelity=0.0)


def test_layer_on_zero_state_is_identity_at_zero():
    m = mps_from_statevector(statevec.zero_state(5))
    layer = build_layer(m)
    psi = _disentangle_dense(statevec.zero_state(5), layer)
    assert abs(abs(psi[0]) - 1.0) <= 1e-12


def test_layer_disentangles_ghz():
    m = mps_from_statevector(ghz(3))
    stack = single_layer_stack(m)
    assert residual(m, stack) <= 1e-10


def test_layer_gate_structure_bit_exact():
    rng = np.random.default_rng(31)
    v = random_state(rng, 6)
    m = mps_from_statevector(v, chi_max=2)
    layer = build_layer(m)
    # end gate equals the last tensor exactly
    assert np.array_equal(layer.g_last, m.tensors[-1][:, :, 0])
    # first gate column 0 is the vectorized first tensor
    t0 = m.tensors[0]
    expect = np.zeros((2, 2))
    expect[:, : t0.shape[2]] = t0[:, 0, :]
    assert np.array_equal(layer.g_first[:, 0], expect.reshape(4))
    # middle gate columns 2k hold the tensor slices
    for i, g in enumerate(layer.g_middle):
        t = m.tensors[i + 1]
        for k in range(t.shape[1]):
            expect = np.zeros((2, 2))
            expect[:, : t.shape[2]] = t[:, k, :]
            assert np.array_equal(g[:, 2 * k], expect.reshape(4))


def test_layer_gates_orthogonal():
    rng = np.random.default_rng(32)
    m = mps_from_statevector(random_state(rng, 7), chi_max=2)
    layer = build_layer(m)
    for g in (layer.g_first, *layer.g_middle):
        assert np.allclose(g.T @ g, np.eye(4), atol=1e-10)
    assert np.allclose(layer.g_last.T @ layer.g_last, np.eye(2), atol=1e-10)


def test_chi2_exactness_random_states():
    rng = np.random.default_rng(33)
    worst = 0.0
    for n in range(3, 11):
        for _ in range(4):
            m = mps_from_statevector(random_state(rng, n), chi_max=2)
            worst = max(worst, residual(m, single_layer_stack(m)))
    assert worst <= 1e-10, f"worst residual {worst:.3e}"


def test_build_layer_validation():
    rng = np.random.default_rng(34)
    m4 = mps_from_statevector(random_state(rng, 6), chi_max=4)
    with pytest.raises(DisentanglerError):
        build_layer(m4)  # bond dim exceeds 2
    from symprep.mps import Mps

    junk = Mps([t.copy() * 1.5 for t in mps_from_statevector(ghz(4), chi_max=2).tensors])
    with pytest.raises(DisentanglerError):
        build_layer(junk)  # not canonical


def test_build_stack_single_layer_chi2():
    rng = np.random.default_rng(35)
    m = mps_from_statevector(random_state(rng, 5), chi_max=2)
    stack = build_stack(m, num_layers=1)
    assert len(stack.layers) == 1
    assert stack.residual_infidelity <= 1e-10
    assert residual(m, stack) <= 1e-10


def test_build_stack_more_layers_help():
    rng = np.random.default_rng(36)
    m = mps_from_statevector(random_state(rng, 6), chi_max=4)
    one = build_stack(m, num_layers=1)
    two = build_stack(m, num_layers=2)
    assert two.residual_infidelity <= one.residual_infidelity + 1e-12
    assert len(two.residual_history) == 2
    assert two.residual_history[1] <= two.residual_history[0] + 1e-12


def test_build_stack_history_tracks_residual_op():
    m = mps_from_statevector(half_normal_amplitudes())
    stack = build_stack(m, num_layers=3)
    dense = residual(m, stack)
    assert abs(dense - stack.residual_infidelity) <= 1e-9
    one = build_stack(m, num_layers=1)
    assert dense < residual(m, one)


def test_build_stack_early_stop():
    m = mps_from_statevector(ghz(4), chi_max=2)
    stack = build_stack(m, num_layers=5, early_stop_tol=1e-12)
    assert len(stack.layers) == 1  # chi=2 input disentangles in one round


def test_build_stack_validation():
    m = mps_from_statevector(ghz(4))
    with pytest.raises(DisentanglerError):
        build_stack(m, num_layers=0)
    with pytest.raises(DisentanglerError):
        build_stack(m, num_layers=1, chi_work=1)


def test_residual_empty_stack():
    stack = DisentanglerStack(layers=(), n_qubits=4, residual_infidelity=0.0)
    m = mps_from_statevector(statevec.zero_state(4))
    assert residual(m, stack) == 0.0


def test_residual_qubit_mismatch():
    m = mps_from_statevector(ghz(4), chi_max=2)
    stack = single_layer_stack(m)
    m5 = mps_from_statevector(ghz(5), chi_max=2)
    with pytest.raises(DisentanglerError):
        residual(m5, stack)


def test_truncate_then_layer_pipeline_identity():
    # disentangling the chi=2 truncation exactly == preparing that truncation
    m = mps_from_statevector(half_normal_amplitudes())
    coarse, _ = truncate(m, 2)
    stack = single_layer_stack(coarse)
    assert residual(coarse, stack) <= 1e-10
    psi = to_statevector(coarse)
    for layer in stack.layers:
        psi = _disentangle_dense(psi, layer)
    assert abs(abs(psi[0]) - 1.0) <= 1e-10

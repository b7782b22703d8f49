import json

import numpy as np
import pytest

from conftest import (
    channels_act_equal,
    complementary_action_oracle,
    env_trace,
    random_density,
    random_hermitian,
)
from phaseport.channels import (
    DensityMatrix,
    KrausFamily,
    PureState,
    adjoint_apply,
    apply,
    complementary,
    frame_operator,
    from_json_dict,
    load_channel,
    mix_kraus,
    pad,
    random_kraus_family,
    random_unitary,
    save_channel,
    stinespring,
    to_json_dict,
)
from phaseport.errors import (
    ChannelFormatError,
    DimensionMismatch,
    DomainError,
    NotUnitary,
)
from phaseport.zoo import zoo

E00 = np.array([[1, 0], [0, 0]], dtype=complex)
E11 = np.array([[0, 0], [0, 1]], dtype=complex)
PLUS = np.array([1, 1]) / np.sqrt(2)


def test_apply_identity_family():
    fam = KrausFamily.from_ops([np.eye(2)])
    rho = random_density(2, np.random.default_rng(0))
    assert np.abs(apply(fam, rho) - rho).max() < 1e-15


def test_apply_dephasing_kills_coherence():
    fam = KrausFamily.from_ops([E00, E11])
    out = apply(fam, np.outer(PLUS, PLUS))
    assert np.abs(out - np.eye(2) / 2).max() < 1e-15


def test_apply_reset_sends_everything_to_ground():
    fam = zoo("reset")
    rng = np.random.default_rng(1)
    for _ in range(5):
        out = apply(fam, random_density(2, rng))
        assert np.abs(out - E00).max() < 1e-12


def test_apply_dimension_mismatch():
    fam = KrausFamily.from_ops([np.eye(2)])
    with pytest.raises(DimensionMismatch):
        apply(fam, np.eye(3))


def test_apply_preserves_hermiticity_and_trace():
    rng = np.random.default_rng(2)
    for _ in range(10):
        fam = random_kraus_family(3, 2, 2, rng)
        rho = random_density(3, rng)
        out = apply(fam, rho)
        assert np.abs(out - out.conj().T).max() < 1e-10
        assert abs(np.trace(out) - np.trace(rho)) < 1e-10


def test_adjoint_unital_for_tp():
    rng = np.random.default_rng(3)
    fam = random_kraus_family(3, 4, 2, rng)
    assert np.abs(adjoint_apply(fam, np.eye(4)) - np.eye(3)).max() < 1e-10


def test_adjointness_pairing():
    rng = np.random.default_rng(4)
    fam = random_kraus_family(2, 3, 2, rng)
    for _ in range(10):
        x = random_hermitian(2, rng)
        y = random_hermitian(3, rng)
        lhs = np.trace(y.conj().T @ apply(fam, x))
        rhs = np.trace(adjoint_apply(fam, y).conj().T @ x)
        assert abs(lhs - rhs) < 1e-10


def test_adjoint_identity_family():
    fam = KrausFamily.from_ops([np.eye(2)])
    x = random_hermitian(2, np.random.default_rng(5))
    assert np.abs(adjoint_apply(fam, x) - x).max() < 1e-15


def test_frame_operator_tp_is_identity():
    rng = np.random.default_rng(6)
    fam = random_kraus_family(3, 2, 3, rng)
    assert np.abs(frame_operator(fam) - np.eye(3)).max() < 1e-10
    assert fam.is_trace_preserving


def test_frame_operator_trine_is_identity():
    assert np.abs(frame_operator(zoo("trine")) - np.eye(2)).max() < 1e-12


def test_frame_operator_scaled_projector():
    fam = KrausFamily.from_ops([2 * E00])
    assert np.allclose(frame_operator(fam), 4 * E00)
    assert not fam.is_trace_preserving


def test_mix_kraus_identity_matrix():
    fam = zoo("z_dephasing")
    mixed = mix_kraus(fam, np.eye(2))
    for a, b in zip(fam.ops, mixed.ops):
        assert np.array_equal(a, b)


def test_mix_kraus_preserves_action():
    rng = np.random.default_rng(7)
    fam = random_kraus_family(2, 2, 3, rng)
    u = random_unitary(3, rng)
    assert channels_act_equal(fam, mix_kraus(fam, u), rng, trials=20)


def test_mix_kraus_swap_permutation():
    fam = zoo("z_dephasing")
    swap = np.array([[0, 1], [1, 0]], dtype=complex)
    mixed = mix_kraus(fam, swap)
    assert np.array_equal(mixed.ops[0], fam.ops[1])
    assert np.array_equal(mixed.ops[1], fam.ops[0])


def test_mix_kraus_rejects_non_unitary():
    fam = zoo("z_dephasing")
    with pytest.raises(NotUnitary):
        mix_kraus(fam, np.array([[1, 0], [1, 1]], dtype=complex))
    with pytest.raises(DimensionMismatch):
        mix_kraus(fam, np.eye(3))


def test_stinespring_identity_family():
    fam = KrausFamily.from_ops([np.eye(2)])
    assert np.array_equal(stinespring(fam), np.eye(2))


def test_stinespring_isometry_for_tp():
    rng = np.random.default_rng(8)
    fam = random_kraus_family(3, 2, 4, rng)
    v = stinespring(fam)
    assert v.shape == (2 * 4, 3)
    assert np.abs(v.conj().T @ v - np.eye(3)).max() < 1e-10
    # block i of the stacked matrix is the i-th Kraus operator
    for i, op in enumerate(fam.ops):
        assert np.array_equal(v[2 * i : 2 * (i + 1), :], op)


def test_stinespring_partial_trace_oracle():
    rng = np.random.default_rng(9)
    fam = random_kraus_family(3, 2, 3, rng)
    v = stinespring(fam)
    for _ in range(5):
        rho = random_density(3, rng)
        big = v @ rho @ v.conj().T
        assert np.abs(env_trace(big, 2, 3) - apply(fam, rho)).max() < 1e-10


def test_complementary_identity_family():
    fam = KrausFamily.from_ops([np.eye(3)])
    comp = complementary(fam)
    assert comp.num_ops == 3 and comp.out_dim == 1
    for a in range(3):
        expected = np.zeros((1, 3)); expected[0, a] = 1
        assert np.array_equal(comp.ops[a], expected)
    rho = random_density(3, np.random.default_rng(10))
    assert abs(apply(comp, rho)[0, 0] - np.trace(rho)) < 1e-12


def test_complementary_matches_definition_formula():
    rng = np.random.default_rng(11)
    for _ in range(10):
        d, n, m = rng.integers(2, 5, size=3)
        m = max(int(m), int(np.ceil(d / n)))
        fam = random_kraus_family(int(d), int(n), int(m), rng)
        comp = complementary(fam)
        rho = random_density(int(d), rng)
        assert np.abs(
            apply(comp, rho) - complementary_action_oracle(fam, rho)
        ).max() < 1e-12


def test_complementary_of_dephasing():
    fam = zoo("z_dephasing")
    comp = complementary(fam)
    rho = random_density(2, np.random.default_rng(12))
    out = apply(comp, rho)
    assert np.abs(out - np.diag(np.diagonal(rho))).max() < 1e-12
    assert np.abs(out - complementary_action_oracle(fam, rho)).max() < 1e-12


def test_double_complement_recovers_action():
    rng = np.random.default_rng(13)
    for _ in range(20):
        d, n, m = (int(x) for x in rng.integers(2, 5, size=3))
        m = max(m, int(np.ceil(d / n)))
        fam = random_kraus_family(d, n, m, rng)
        dc = complementary(complementary(fam))
        assert dc.out_dim == fam.out_dim
        assert channels_act_equal(fam, dc, rng, trials=5)


def test_pad_noop_and_action():
    fam = zoo("z_dephasing")
    assert pad(fam, 2) is fam
    padded = pad(fam, 4)
    assert padded.num_ops == 4
    rng = np.random.default_rng(14)
    assert channels_act_equal(fam, padded, rng, trials=5)
    with pytest.raises(DomainError):
        pad(fam, 1)


def test_trace_defect_flags_non_tp():
    half = KrausFamily.from_ops([np.eye(2) / 2])
    assert half.trace_defect > 0.7
    assert not half.is_trace_preserving


def test_kraus_family_validation():
    with pytest.raises(DomainError):
        KrausFamily(in_dim=2, out_dim=2, ops=())
    with pytest.raises(DimensionMismatch):
        KrausFamily(in_dim=2, out_dim=2, ops=(np.eye(3),))
    with pytest.raises(DomainError):
        KrausFamily(in_dim=2, out_dim=2, ops=(np.full((2, 2), np.nan),))


def test_density_matrix_validation():
    with pytest.raises(DomainError):
        DensityMatrix(dim=2, mat=np.diag([1.0, 1.0]))
    with pytest.raises(DomainError):
        DensityMatrix(dim=2, mat=np.array([[0.5, 0.5], [0.4, 0.5]]))
    dm = DensityMatrix.from_mat(np.diag([0.25, 0.75]))
    assert dm.dim == 2


def test_pure_state_validation():
    with pytest.raises(DomainError):
        PureState(dim=2, vec=np.array([1.0, 1.0]))
    ps = PureState.from_vec(np.array([1.0, 1.0]))
    assert abs(np.linalg.norm(ps.vec) - 1) < 1e-12


def test_json_roundtrip(tmp_path):
    rng = np.random.default_rng(15)
    fam = random_kraus_family(2, 3, 2, rng)
    data = to_json_dict(fam)
    back = from_json_dict(data)
    for a, b in zip(fam.ops, back.ops):
        assert np.abs(a - b).max() < 1e-15
    path = tmp_path / "chan.json"
    save_channel(fam, path)
    loaded = load_channel(path)
    assert loaded.in_dim == 2 and loaded.out_dim == 3
    assert channels_act_equal(fam, loaded, rng, trials=5)


def test_json_schema_shape():
    fam = KrausFamily.from_ops([np.array([[1, 0], [0, 1j]])])
    data = to_json_dict(fam)
    assert data["in_dim"] == 2 and data["out_dim"] == 2
    assert data["ops"][0][1][1] == [0.0, 1.0]


def test_json_errors(tmp_path):
    with pytest.raises(ChannelFormatError):
        from_json_dict({"in_dim": 2, "out_dim": 2})
    with pytest.raises(ChannelFormatError):
        from_json_dict({"in_dim": 2, "out_dim": 2, "ops": [[[[0, 0]]]]})
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ChannelFormatError):
        load_channel(bad)


def test_random_kraus_family_is_tp():
    rng = np.random.default_rng(16)
    for _ in range(10):
        d, n, m = (int(x) for x in rng.integers(1, 5, size=3))
        m = max(m, int(np.ceil(d / n)))
        fam = random_kraus_family(d, n, m, rng)
        assert fam.is_trace_preserving
    with pytest.raises(DomainError):
        random_kraus_family(4, 1, 2, rng)

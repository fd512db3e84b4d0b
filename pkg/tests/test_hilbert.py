import numpy as np
import pytest

import kerrcav as kc
from kerrcav import hilbert, models, numerics
from kerrcav.errors import ValidationError


def test_space_dimensions():
    assert kc.build_space(n_max=4, n_atoms=2, levels=3,
                          representation="product").dim == 45
    assert kc.build_space(n_max=4, n_atoms=2, levels=3,
                          representation="symmetric").dim == 30
    assert kc.build_space(n_max=0, n_atoms=1, levels=2).dim == 2


def test_dimension_guard_reports_size():
    with pytest.raises(ValidationError, match=r"\d+ exceeds"):
        kc.build_space(n_max=100, n_atoms=12, levels=3,
                       representation="product")


def test_auto_representation():
    assert kc.build_space(n_max=1, n_atoms=3, levels=2).representation == "product"
    assert kc.build_space(n_max=1, n_atoms=4, levels=2).representation == "symmetric"


def test_annihilation_action():
    space = kc.build_space(n_max=3, n_atoms=1, levels=2)
    a = kc.annihilation(space).matrix
    ket2 = kc.basis_state(space, 2, "0")
    ket1 = kc.basis_state(space, 1, "0")
    assert numerics.max_abs_diff(a @ ket2, np.sqrt(2) * ket1) < 1e-14
    ket0 = kc.basis_state(space, 0, "0")
    assert np.abs(a @ ket0).max() == 0


def test_truncated_commutator_identity_on_inner_sectors():
    # brute-force [a, a^dag] on dims <= 10: diagonal 1 for n < n_max
    space = kc.build_space(n_max=4, n_atoms=1, levels=2)
    a = kc.annihilation(space).matrix
    comm = a @ a.conj().T - a.conj().T @ a
    for n in range(space.n_max):
        i = space.index(n, 0)
        assert abs(comm[i, i] - 1.0) < 1e-14
    # the edge of the truncation is the only deviation
    i = space.index(space.n_max, 0)
    assert abs(comm[i, i] - (1 - (space.n_max + 1))) < 1e-12


def test_number_operator_diagonal():
    space = kc.build_space(n_max=3, n_atoms=2, levels=2)
    a = kc.annihilation(space).matrix
    n = a.conj().T @ a
    assert numerics.max_abs_diff(n, np.diag(np.diag(n))) < 1e-14
    expected = [space.photon_numbers(i)[0] for i in range(space.dim)]
    assert numerics.max_abs_diff(np.diag(n).real, expected) < 1e-12
    assert numerics.max_abs_diff(kc.number_op(space).matrix, n) < 1e-14


def test_collective_flip_on_two_atoms():
    space = kc.build_space(n_max=0, n_atoms=2, levels=2)
    spm = kc.collective(space, "+", "-").matrix
    minus2 = kc.basis_state(space, 0, "--")
    expected = (kc.basis_state(space, 0, "+-") + kc.basis_state(space, 0, "-+"))
    assert numerics.max_abs_diff(spm @ minus2, expected) < 1e-14


def test_s3_single_atom():
    space = kc.build_space(n_max=0, n_atoms=1, levels=2)
    s3 = kc.s3(space).matrix
    minus = kc.basis_state(space, 0, "-")
    assert numerics.max_abs_diff(s3 @ minus, -minus) < 1e-14


@pytest.mark.parametrize("n_atoms", [1, 2, 3, 4])
@pytest.mark.parametrize("representation", ["product", "symmetric"])
@pytest.mark.parametrize("levels", [2, 3])
def test_su2_commutators(n_atoms, representation, levels):
    space = kc.build_space(n_max=1, n_atoms=n_atoms, levels=levels,
                           representation=representation)
    spm = kc.collective(space, "+", "-")
    smp = kc.collective(space, "-", "+")
    s3 = kc.s3(space)
    assert numerics.max_abs_diff(
        spm.commutator(smp).matrix, s3.matrix) < 1e-12
    # with S3 = sum(|+><+| - |-><-|) the raising constant is 2, not 1
    assert numerics.max_abs_diff(
        s3.commutator(spm).matrix, 2 * spm.matrix) < 1e-12


def test_adjoint_exact():
    space = kc.build_space(n_max=2, n_atoms=3, levels=2,
                           representation="symmetric")
    spm = kc.collective(space, "+", "-").matrix
    smp = kc.collective(space, "-", "+").matrix
    assert np.array_equal(spm.conj().T, smp)


def test_basis_state_first_vector():
    space = kc.build_space(n_max=2, n_atoms=2, levels=3)
    v = kc.basis_state(space, 0, "00")
    expected = np.zeros(space.dim)
    expected[0] = 1
    assert numerics.max_abs_diff(v, expected) == 0


def test_minus_state_single_atom():
    space = kc.build_space(n_max=0, n_atoms=1, levels=2)
    v = kc.basis_state(space, 0, "-")
    expected = np.array([1, -1]) / np.sqrt(2)
    assert numerics.max_abs_diff(v, expected) < 1e-15


def test_minus_state_symmetric_two_atoms():
    # (|0> - |1>)^(x2)/2 over occupations (2,0), (1,1), (0,2)
    space = kc.build_space(n_max=0, n_atoms=2, levels=2,
                           representation="symmetric")
    v = kc.basis_state(space, 0, "--")
    expected = np.array([0.5, -1 / np.sqrt(2), 0.5])
    assert numerics.max_abs_diff(v, expected) < 1e-14


def test_symmetric_occupation_state():
    space = kc.build_space(n_max=1, n_atoms=3, levels=2,
                           representation="symmetric")
    v = kc.basis_state(space, 1, (2, 1))
    i = space.index(1, space.atomic_basis.index((2, 1)))
    assert v[i] == 1.0 and abs(np.linalg.norm(v) - 1) < 1e-15


def test_symmetric_rejects_nonuniform_labels():
    space = kc.build_space(n_max=0, n_atoms=2, levels=2,
                           representation="symmetric")
    with pytest.raises(ValidationError):
        kc.basis_state(space, 0, "+-")


def test_level_validation():
    space2 = kc.build_space(n_max=0, n_atoms=1, levels=2)
    with pytest.raises(ValidationError):
        kc.collective(space2, 2, 0)
    with pytest.raises(ValidationError):
        kc.basis_state(space2, 0, "2")
    with pytest.raises(ValidationError):
        kc.collective(space2, "x", 0)


def test_photon_bounds_checked():
    space = kc.build_space(n_max=2, n_atoms=1, levels=2)
    with pytest.raises(ValidationError):
        kc.basis_state(space, 3, "0")


def test_basis_labels():
    space = kc.build_space(n_max=2, n_atoms=2, levels=2)
    i = space.index(2, space.atomic_basis.index((0, 1)))
    assert space.basis_label(i) == "n=2;atoms=01"
    sym = kc.build_space(n_max=2, n_atoms=2, levels=3,
                         representation="symmetric")
    j = sym.index(2, sym.atomic_basis.index((1, 1, 0)))
    assert sym.basis_label(j) == "n=2;occ=(1,1,0)"
    two = kc.build_space(n_max=1, n_atoms=1, levels=2, n_modes=2)
    k = two.index((1, 0), 0)
    assert two.basis_label(k).startswith("n=(1,0);")


def test_two_mode_operators_commute():
    space = kc.build_space(n_max=2, n_atoms=1, levels=2, n_modes=2)
    na = kc.number_op(space, 0).matrix
    nb = kc.number_op(space, 1).matrix
    assert numerics.max_abs_diff(na @ nb, nb @ na) < 1e-14
    b = kc.annihilation(space, 1).matrix
    ket = kc.basis_state(space, (0, 2), "0")
    out = b @ ket
    assert abs(np.linalg.norm(out) - np.sqrt(2)) < 1e-14


@pytest.mark.parametrize("n_atoms", [1, 2, 3])
def test_representation_agreement(n_atoms):
    # identical overlap dynamics in the product and symmetric representations
    g = 1e8
    p = kc.derive_params(kc.SchemeParams(g=g, delta1=10 * g, theta=g,
                                         omega=100 * g, n_atoms=n_atoms))
    times = np.linspace(0, 40 / g, 7)
    series = {}
    for rep in ("product", "symmetric"):
        space = kc.build_space(n_max=2, n_atoms=n_atoms, levels=2,
                               representation=rep)
        h = models.effective_hamiltonian(space, p, "h1int").matrix
        psi = kc.basis_state(space, 1, "-" * n_atoms)
        eig = numerics.HermitianEigensystem(h)
        series[rep] = np.array([
            psi.conj() @ (eig.propagator(t) @ psi) for t in times])
    assert np.abs(series["product"] - series["symmetric"]).max() < 1e-8


def test_plus_population():
    space = kc.build_space(n_max=0, n_atoms=2, levels=2)
    assert abs(hilbert.plus_population(
        space, kc.basis_state(space, 0, "++")) - 2) < 1e-12
    assert abs(hilbert.plus_population(
        space, kc.basis_state(space, 0, "--"))) < 1e-12


def test_operator_shape_validation():
    space = kc.build_space(n_max=1, n_atoms=1, levels=2)
    with pytest.raises(ValidationError):
        hilbert.Operator(np.eye(3), space, "bad")

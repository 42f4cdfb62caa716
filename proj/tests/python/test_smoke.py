"""Smoke tests for the python bindings (run against the in-tree build)."""

import math

import numpy as np
import pytest

import _syknqs as nqs


def test_basis_and_models():
    basis = nqs.SectorBasis(8, 4)
    assert len(basis) == 70
    assert basis.rank(basis.word(17)) == 17

    h = nqs.build_heisenberg(4)
    assert h.dim == 6
    dense = h.dense()
    assert np.allclose(dense, dense.conj().T)

    g = nqs.ground_state(h)
    assert g.energy == pytest.approx(-8.0, abs=1e-10)
    assert np.linalg.norm(h.dense() @ g.vector - g.energy * g.vector) < 1e-9


def test_syk_couplings_and_entropy():
    c = nqs.CouplingTensor.sample(6, 11)
    assert c.at(0, 1, 2, 3) == -c.at(1, 0, 2, 3)

    h = nqs.build_syk(6, 11)
    g = nqs.ground_state(h)
    basis = nqs.SectorBasis(6, 3)
    s = nqs.bipartite_entropy(g.vector, basis)
    assert 0.0 < s < 3 * math.log(2.0)
    assert nqs.page_value(6) == pytest.approx(3 * math.log(2) - 0.5)


def test_network_and_losses():
    arch = nqs.Architecture(num_sites=6, alpha=2, mu=2)
    assert arch.hidden == 12
    assert arch.num_params == (12 * 6 + 12) + (12 * 12 + 12)

    params = nqs.NetworkParams.init(arch, seed=3)
    basis = nqs.SectorBasis(6, 3)
    psi = nqs.amplitudes(params, basis)
    assert psi.shape == (20,)
    assert np.all(np.isfinite(psi))

    h = nqs.build_syk(6, 11)
    g = nqs.ground_state(h)
    assert nqs.voe_loss(params, h) >= g.energy - 1e-10
    loss = nqs.overlap_loss(params, g.vector, basis)
    assert 0.0 <= loss <= 1.0

    value, grad = nqs.loss_gradient(params, "overlap", h, g.vector)
    assert value == pytest.approx(loss)
    assert grad.shape == (2 * arch.num_params,)


def test_training_and_compression():
    h = nqs.build_heisenberg(4)
    g = nqs.ground_state(h)
    arch = nqs.Architecture(num_sites=4, alpha=2, mu=2)

    config = nqs.TrainConfig()
    config.t_max = 20000
    config.enable_truncation = False
    record = nqs.train(arch, h, g, config)
    assert record.verdict == "converged"
    assert record.best_delta_e < 1e-3

    truncated, report = nqs.svd_truncate(record.best_params, 0.0, h, g.energy)
    assert report.retained_fraction == 1.0
    assert report.delta_e_after == pytest.approx(report.delta_e_before, abs=1e-10)


def test_seed_derivation():
    assert nqs.derive_seed(1, "coupling") == nqs.derive_seed(1, "coupling")
    assert nqs.derive_seed(1, "coupling") != nqs.derive_seed(1, "init")

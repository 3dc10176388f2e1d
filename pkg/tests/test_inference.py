"""Likelihood evaluation, grid MLE, the L=0 closed form, and bootstrap."""

import json
import math

import numpy as np
import pytest

from oracles import closed_form_parity
from rae.inference import (
    BOOTSTRAP_REPLICATES,
    DatasetFormatError,
    IdentifiabilityError,
    MLEGrid,
    ParityDataset,
    ParityRecord,
    bootstrap,
    chebyshev_parity_probability,
    direct_estimate,
    load_dataset,
    log_likelihood,
    mle_estimate,
    rmse_stats,
    save_dataset,
)
from rae.simulator import RAECircuitSpec, parity_distribution
from rae.pauli import PauliString, builtin_problem, oracle_expectation


def exact_count_dataset(pi: float, lam: float, layers, n_shots: int,
                        pauli: str = "Z") -> ParityDataset:
    records = tuple(
        ParityRecord(L, n_shots,
                     int(round(n_shots * chebyshev_parity_probability(pi, lam, L, 0))))
        for L in layers
    )
    return ParityDataset(pauli=pauli, records=records)


# default-grid spacings, used for landing tolerances below
PI_STEP = 2.0 * (1.0 - 1e-9) / 9999
LAMBDA_STEP = 0.5 / 99


class TestChebyshevParityProbability:
    def test_halfway_point(self):
        assert chebyshev_parity_probability(0.5, 0.0, 0, 0) == pytest.approx(0.75)

    def test_unit_amplitude_is_certain(self):
        for layers in (0, 1, 3, 8):
            assert chebyshev_parity_probability(1.0, 0.0, layers, 0) == pytest.approx(1.0)
            assert chebyshev_parity_probability(1.0, 0.0, layers, 1) == pytest.approx(0.0)

    def test_parities_sum_to_one(self):
        p0 = chebyshev_parity_probability(-0.3, 0.07, 4, 0)
        p1 = chebyshev_parity_probability(-0.3, 0.07, 4, 1)
        assert p0 + p1 == pytest.approx(1.0, abs=1e-15)

    def test_two_qubit_operating_point(self):
        # odd-parity complement of the known even-parity value at L=2
        p1 = chebyshev_parity_probability(-0.2238, 0.045, 2, 1)
        assert p1 == pytest.approx(1.0 - 0.09617, abs=1e-4)

    def test_matches_density_matrix_simulator(self):
        _, ansatz = builtin_problem("two_qubit")
        target = PauliString("XX")
        pi = oracle_expectation(ansatz, target)
        for layers in (0, 2, 5):
            for lam in (0.0, 0.045):
                spec = RAECircuitSpec(ansatz=ansatz, target=target,
                                      layers=layers, lam=lam)
                p_even, _ = parity_distribution(spec)
                model = chebyshev_parity_probability(pi, lam, layers, 0)
                assert model == pytest.approx(p_even, abs=1e-10)

    def test_matches_reference_formula_on_random_draws(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            pi = rng.uniform(-1, 1)
            lam = rng.uniform(0, 0.3)
            layers = int(rng.integers(0, 12))
            d = int(rng.integers(0, 2))
            assert chebyshev_parity_probability(pi, lam, layers, d) == pytest.approx(
                closed_form_parity(pi, lam, layers, d), abs=1e-14)

    def test_broadcasts_over_pi(self):
        pi = np.linspace(-0.9, 0.9, 7)
        out = chebyshev_parity_probability(pi, 0.01, 2, 0)
        assert out.shape == (7,)

    def test_validation(self):
        with pytest.raises(ValueError):
            chebyshev_parity_probability(0.5, 0.0, 0, 2)
        with pytest.raises(ValueError):
            chebyshev_parity_probability(0.5, 0.0, -1, 0)
        with pytest.raises(ValueError):
            chebyshev_parity_probability(0.5, -0.1, 0, 0)


class TestLogLikelihood:
    def test_certain_data_peaks_at_unit_amplitude(self):
        ds = ParityDataset(pauli="Z", records=(ParityRecord(0, 100, 100),))
        near_one = log_likelihood(ds, 1.0 - 1e-9, 0.0)
        assert abs(near_one) < 1e-6
        assert near_one > log_likelihood(ds, 0.5, 0.0)

    def test_coin_flip_data_maximized_at_zero(self):
        # even/odd balance at every depth puts the noiseless argmax at Pi = 0
        ds = ParityDataset(pauli="Z", records=tuple(
            ParityRecord(L, 8192, 4096) for L in range(9)))
        pi = np.linspace(-0.999, 0.999, 4001)
        values = log_likelihood(ds, pi, 0.0)
        assert abs(pi[np.argmax(values)]) < 1e-3

    def test_record_permutation_invariant(self):
        records = tuple(ParityRecord(L, 200, 40 + 13 * L) for L in range(5))
        ds = ParityDataset(pauli="Z", records=records)
        ds_rev = ParityDataset(pauli="Z", records=records[::-1])
        for pi, lam in [(-0.7, 0.0), (0.2, 0.13), (0.94, 0.4)]:
            assert log_likelihood(ds, pi, lam) == log_likelihood(ds_rev, pi, lam)

    def test_finite_at_impossible_data(self):
        # clamping keeps zero-probability observations at a finite penalty
        ds = ParityDataset(pauli="Z", records=(ParityRecord(0, 10, 0),))
        value = log_likelihood(ds, 1.0, 0.0)
        assert math.isfinite(value)
        assert value == pytest.approx(10 * math.log(1e-12))


class TestMLEEstimate:
    def test_noiseless_self_consistency(self):
        ds = exact_count_dataset(0.9745, 0.0, range(9), 8192)
        result = mle_estimate(ds)
        assert abs(result.pi_hat - 0.9745) <= PI_STEP
        assert result.lambda_hat == 0.0
        assert not result.degenerate_maximum

    def test_noisy_operating_point_recovered(self):
        ds = exact_count_dataset(-0.2238, 0.045, range(9), 8192, pauli="XX")
        result = mle_estimate(ds)
        assert abs(result.pi_hat + 0.2238) <= PI_STEP
        assert abs(result.lambda_hat - 0.045) <= LAMBDA_STEP

    def test_argmax_matches_direct_surface_scan(self):
        # small grid, brute-force double loop as the oracle
        ds = exact_count_dataset(0.4, 0.08, (0, 1, 3), 500)
        grid = MLEGrid(pi_points=101, lambda_points=11, lambda_max=0.2)
        best = (-np.inf, None, None)
        for pi in grid.pi_values():
            for lam in grid.lambda_values():
                value = log_likelihood(ds, float(pi), float(lam))
                if value > best[0]:
                    best = (value, float(pi), float(lam))
        result = mle_estimate(ds, grid)
        assert result.pi_hat == pytest.approx(best[1], abs=1e-15)
        assert result.lambda_hat == pytest.approx(best[2], abs=1e-15)
        assert result.log_likelihood_max == pytest.approx(best[0], rel=1e-12)

    def test_unboosted_dataset_rejected(self):
        ds = ParityDataset(pauli="Z", records=(ParityRecord(0, 100, 80),))
        with pytest.raises(IdentifiabilityError):
            mle_estimate(ds)

    def test_balanced_counts_land_at_zero(self):
        ds = ParityDataset(pauli="Z", records=tuple(
            ParityRecord(L, 8192, 4096) for L in range(9)))
        result = mle_estimate(ds)
        assert abs(result.pi_hat) <= PI_STEP

    def test_flat_ridge_flagged_degenerate(self):
        # a single L=1 record with balanced counts peaks wherever the
        # order-3 Chebyshev vanishes: three separated ridges, exact mirror
        # ties, so the runner-up sits far from the argmax
        ds = ParityDataset(pauli="Z", records=(ParityRecord(1, 100, 50),))
        result = mle_estimate(ds)
        assert result.degenerate_maximum
        assert result.pi_hat < 0.0
        assert abs(4 * result.pi_hat ** 3 - 3 * result.pi_hat) < 1e-3

    def test_estimate_within_grid_ranges(self):
        rng = np.random.default_rng(3)
        grid = MLEGrid(pi_points=201, lambda_points=11, lambda_max=0.3)
        for _ in range(10):
            records = tuple(
                ParityRecord(L, 50, int(rng.integers(0, 51))) for L in (0, 1, 2))
            result = mle_estimate(ParityDataset(pauli="Z", records=records), grid)
            assert -1.0 < result.pi_hat < 1.0
            assert 0.0 <= result.lambda_hat <= 0.3


class TestDirectEstimate:
    def test_closed_form_values(self):
        def ds(e, n):
            return ParityDataset(pauli="Z", records=(ParityRecord(0, n, e),))
        assert direct_estimate(ds(8192, 8192)).pi_hat == 1.0
        assert direct_estimate(ds(4096, 8192)).pi_hat == 0.0
        assert direct_estimate(ds(6144, 8192)).pi_hat == 0.5
        assert direct_estimate(ds(0, 8192)).pi_hat == -1.0

    def test_exact_formula_on_random_counts(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            n = int(rng.integers(1, 10000))
            e = int(rng.integers(0, n + 1))
            ds = ParityDataset(pauli="Z", records=(ParityRecord(0, n, e),))
            result = direct_estimate(ds)
            assert result.pi_hat == (2 * e - n) / n
            assert result.lambda_hat == 0.0

    def test_agrees_with_lambda_pinned_grid_scan(self):
        grid = MLEGrid()
        pi = grid.pi_values()
        for e, n in [(700, 1000), (13, 64), (500, 1000), (999, 1000)]:
            ds = ParityDataset(pauli="Z", records=(ParityRecord(0, n, e),))
            values = log_likelihood(ds, pi, 0.0)
            pinned = pi[int(np.argmax(values))]
            assert abs(direct_estimate(ds).pi_hat - pinned) <= PI_STEP

    def test_requires_single_unboosted_record(self):
        boosted = ParityDataset(pauli="Z", records=(
            ParityRecord(0, 10, 5), ParityRecord(1, 10, 5)))
        with pytest.raises(ValueError):
            direct_estimate(boosted)
        no_anchor = ParityDataset(pauli="Z", records=(ParityRecord(1, 10, 5),))
        with pytest.raises(ValueError):
            direct_estimate(no_anchor)


SMALL_GRID = MLEGrid(pi_points=2001, lambda_points=26, lambda_max=0.25)


class TestBootstrap:
    def test_deterministic_given_seed(self):
        ds = exact_count_dataset(-0.2238, 0.045, range(5), 512, pauli="XX")
        a = bootstrap(ds, 40, grid=SMALL_GRID, seed=7)
        b = bootstrap(ds, 40, grid=SMALL_GRID, seed=7)
        assert np.array_equal(a.pi_hats, b.pi_hats)
        assert np.array_equal(a.lambda_hats, b.lambda_hats)
        c = bootstrap(ds, 40, grid=SMALL_GRID, seed=8)
        assert not np.array_equal(a.pi_hats, c.pi_hats)

    def test_batch_size_does_not_change_replicates(self):
        ds = exact_count_dataset(0.6, 0.02, range(4), 256)
        a = bootstrap(ds, 33, grid=SMALL_GRID, seed=1, _batch=4)
        b = bootstrap(ds, 33, grid=SMALL_GRID, seed=1, _batch=33)
        assert np.array_equal(a.pi_hats, b.pi_hats)
        assert np.array_equal(a.lambda_hats, b.lambda_hats)

    def test_prefix_property_of_substreams(self):
        # replicate k depends only on (seed, k): a longer run extends a
        # shorter one without changing its entries
        ds = exact_count_dataset(0.6, 0.02, range(4), 256)
        short = bootstrap(ds, 10, grid=SMALL_GRID, seed=2)
        long = bootstrap(ds, 25, grid=SMALL_GRID, seed=2)
        assert np.array_equal(short.pi_hats, long.pi_hats[:10])

    def test_degenerate_counts_give_identical_replicates(self):
        records = (ParityRecord(0, 64, 64), ParityRecord(1, 64, 0))
        ds = ParityDataset(pauli="Z", records=records)
        reps = bootstrap(ds, 25, grid=SMALL_GRID, seed=0)
        assert np.all(reps.pi_hats == reps.pi_hats[0])

    def test_unboosted_dataset_routes_through_closed_form(self):
        ds = ParityDataset(pauli="Z", records=(ParityRecord(0, 1000, 700),))
        reps = bootstrap(ds, 200, seed=4)
        assert np.all(reps.lambda_hats == 0.0)
        # every replicate is (2e - n)/n for an integer redraw e
        counts = (reps.pi_hats * 1000 + 1000) / 2
        assert np.allclose(counts, np.round(counts))
        # binomial mean matches the observed rate within 3 standard errors
        se = math.sqrt(0.7 * 0.3 / 1000) * 2 / math.sqrt(200)
        assert abs(reps.pi_hats.mean() - 0.4) < 3 * se

    def test_replicate_mean_tracks_full_estimate(self):
        # grid snapping contributes up to one step of systematic offset on
        # top of the monte-carlo error
        ds = exact_count_dataset(-0.2238, 0.045, range(5), 2048, pauli="XX")
        reps = bootstrap(ds, 150, grid=SMALL_GRID, seed=9)
        full = mle_estimate(ds, SMALL_GRID)
        spread = float(np.std(reps.pi_hats))
        pi_step = 2.0 * (1.0 - 1e-9) / (SMALL_GRID.pi_points - 1)
        tol = 3.0 * spread / math.sqrt(150) + pi_step
        assert abs(float(np.mean(reps.pi_hats)) - full.pi_hat) < tol

    def test_replicate_count_validated(self):
        ds = ParityDataset(pauli="Z", records=(ParityRecord(0, 10, 5),))
        with pytest.raises(ValueError):
            bootstrap(ds, 0)

    def test_default_replicate_counts(self):
        assert BOOTSTRAP_REPLICATES[1] == 15000
        assert BOOTSTRAP_REPLICATES[2] == 10000


class TestRmseStats:
    def test_all_replicates_on_reference(self):
        s = rmse_stats([0.9, 0.9, 0.9], 0.9)
        assert s.mse == 0.0 and s.var_mse == 0.0 and s.rmse == 0.0
        assert s.sigma_rmse == 0.0
        assert s.zero_rmse

    def test_single_replicate(self):
        s = rmse_stats([1.0], 0.9)
        assert s.mse == pytest.approx(0.01)
        assert s.rmse == pytest.approx(0.1)
        assert s.var_mse == pytest.approx(0.0, abs=1e-30)

    def test_symmetric_pair(self):
        # both replicates sit 0.1 from the reference, so the squared
        # deviations are constant: variance 0, sigma 0, but rmse nonzero
        s = rmse_stats([0.8, 1.0], 0.9)
        assert s.mse == pytest.approx(0.01)
        assert s.var_mse == pytest.approx(0.0, abs=1e-30)
        assert s.sigma_rmse == pytest.approx(0.0, abs=1e-15)
        assert not s.zero_rmse

    def test_population_conventions(self):
        rng = np.random.default_rng(0)
        values = rng.normal(0.5, 0.01, size=400)
        s = rmse_stats(values, 0.5)
        sq = (values - 0.5) ** 2
        assert s.mse == pytest.approx(sq.mean())
        assert s.var_mse == pytest.approx(((sq - sq.mean()) ** 2).mean())
        assert s.rmse == pytest.approx(math.sqrt(s.mse))
        assert s.sigma_rmse == pytest.approx(math.sqrt(s.var_mse) / (2 * s.rmse))

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            rmse_stats([], 0.0)


class TestDatasetIO:
    def _dataset(self):
        return ParityDataset(
            pauli="XX",
            records=(ParityRecord(0, 8192, 4000), ParityRecord(3, 8192, 7121)),
            metadata={"hamiltonian": "h2_two_qubit", "seed": 17},
        )

    def test_round_trip_is_bit_exact(self, tmp_path):
        path = tmp_path / "xx.json"
        ds = self._dataset()
        save_dataset(str(path), ds)
        loaded = load_dataset(str(path))
        assert loaded == ds
        save_dataset(str(path) + ".again", loaded)
        assert path.read_bytes() == (tmp_path / "xx.json.again").read_bytes()

    def test_json_schema_fields(self, tmp_path):
        path = tmp_path / "ds.json"
        save_dataset(str(path), self._dataset())
        doc = json.loads(path.read_text())
        assert doc["version"] == 1
        assert doc["pauli"] == "XX"
        assert doc["records"][0] == {"L": 0, "n_shots": 8192, "e_even": 4000}

    def test_invalid_json_reported_with_path(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(DatasetFormatError, match="broken.json"):
            load_dataset(str(path))

    def test_missing_field_reported(self, tmp_path):
        path = tmp_path / "short.json"
        path.write_text(json.dumps({"version": 1, "pauli": "Z"}))
        with pytest.raises(DatasetFormatError):
            load_dataset(str(path))

    def test_wrong_version_rejected(self, tmp_path):
        doc = self._dataset().to_dict()
        doc["version"] = 2
        path = tmp_path / "v2.json"
        path.write_text(json.dumps(doc))
        with pytest.raises(DatasetFormatError):
            load_dataset(str(path))

    def test_record_validation(self):
        with pytest.raises(ValueError):
            ParityRecord(0, 100, 101)
        with pytest.raises(ValueError):
            ParityRecord(-1, 100, 50)
        with pytest.raises(ValueError):
            ParityDataset(pauli="Z", records=(
                ParityRecord(0, 10, 5), ParityRecord(0, 10, 6)))
        with pytest.raises(ValueError):
            ParityDataset(pauli="Q", records=(ParityRecord(0, 10, 5),))


class TestMLEGridValidation:
    def test_defaults(self):
        grid = MLEGrid()
        assert grid.pi_points == 10000
        assert grid.lambda_points == 100
        assert grid.lambda_values()[0] == 0.0
        assert grid.lambda_values()[-1] == 0.5
        assert grid.pi_values()[0] == -1.0 + 1e-9

    def test_rejects_degenerate_axes(self):
        with pytest.raises(ValueError):
            MLEGrid(pi_points=1)
        with pytest.raises(ValueError):
            MLEGrid(lambda_max=0.0)
        with pytest.raises(ValueError):
            MLEGrid(pi_epsilon=0.0)

import numpy as np
import pytest

from iofootprint import (
    DomainError,
    GeneratorConfig,
    allocation_coefficients,
    attribute_to_demand,
    attribute_to_value_added,
    direct_intensity,
    generate_economy,
    spectral_radius,
    systemic_intensity,
    technical_coefficients,
    total_intensity,
    validate_balance,
)


class TestGeneratorConfig:
    def test_validation(self):
        with pytest.raises(DomainError):
            GeneratorConfig(n=0, seed=1)
        with pytest.raises(DomainError):
            GeneratorConfig(n=3, seed=1, column_sum_cap=1.0)
        with pytest.raises(DomainError):
            GeneratorConfig(n=3, seed=1, column_sum_cap=0.0)
        with pytest.raises(DomainError):
            GeneratorConfig(n=3, seed=1, demand_scale=0.0)
        with pytest.raises(DomainError):
            GeneratorConfig(n=3, seed=1, emission_scale=-1.0)


class TestGenerateEconomy:
    def test_deterministic_bit_identical(self):
        cfg = GeneratorConfig(n=7, seed=123)
        econ1, acct1 = generate_economy(cfg)
        econ2, acct2 = generate_economy(cfg)
        assert econ1.sectors == econ2.sectors
        assert np.array_equal(econ1.transactions, econ2.transactions)
        assert np.array_equal(econ1.demand, econ2.demand)
        assert np.array_equal(econ1.value_added, econ2.value_added)
        assert np.array_equal(econ1.totals, econ2.totals)
        assert np.array_equal(acct1.emissions, acct2.emissions)

    @pytest.mark.parametrize("seed", [1, 2, 17, 99])
    @pytest.mark.parametrize("n", [1, 2, 5, 30])
    def test_generated_economies_are_valid(self, n, seed):
        cfg = GeneratorConfig(n=n, seed=seed)
        econ, acct = generate_economy(cfg)
        assert validate_balance(econ, tol_rel=1e-10).ok
        assert (econ.totals > 0).all()
        assert (econ.value_added > 0).all()
        assert (econ.value_added >= (1 - cfg.column_sum_cap) * econ.totals).all()
        assert (acct.emissions >= 0).all()
        est = spectral_radius(technical_coefficients(econ))
        assert est.rho <= cfg.column_sum_cap

    def test_single_sector_construction(self):
        econ, _ = generate_economy(GeneratorConfig(n=1, seed=5))
        a = econ.transactions[0, 0] / econ.totals[0]
        assert a <= 0.9
        assert econ.totals[0] == pytest.approx(econ.demand[0] / (1 - a), rel=1e-12)
        assert econ.value_added[0] == pytest.approx(
            (1 - a) * econ.totals[0], rel=1e-12
        )

    def test_zero_emission_scale(self):
        econ, acct = generate_economy(
            GeneratorConfig(n=4, seed=9, emission_scale=0.0)
        )
        assert acct.total == 0.0
        F = direct_intensity(econ, acct)
        X = total_intensity(F, technical_coefficients(econ))
        Y = systemic_intensity(F, allocation_coefficients(econ))
        demand_report = attribute_to_demand(X, econ.demand, acct)
        value_report = attribute_to_value_added(Y, econ.value_added, acct)
        assert demand_report.total_attributed == 0.0
        assert value_report.total_attributed == 0.0
        assert demand_report.conservation_residual == 0.0

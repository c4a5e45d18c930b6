import numpy as np
import pytest

from chmetric.catalog import exact_fieldset, numeric_fieldset, scaled_rows, snapshot_rows, unscaled_rows
from chmetric.metric import scaled_peakon
from chmetric.peakon import PeakonParams
from chmetric.transform import ScaledSnapshot, zero_scaled


@pytest.mark.parametrize("E,offset", [(1.0, 0.05), (2.0, -0.5), (4.0, 2.0), (2.0, 0.0)])
def test_exact_peakon_satisfies_every_row(E, offset):
    params = PeakonParams(E, 2.0)
    rows = scaled_rows(exact_fieldset(params, 2.0 + offset, 1024))
    rows += unscaled_rows(params, 2.0 + offset, 1024)
    failed = [(r.name, r.worst) for r in rows if not r.passed]
    assert not failed


def test_row_names_are_unique():
    rows = scaled_rows(exact_fieldset(PeakonParams(), 1.0, 64))
    names = [r.name for r in rows]
    assert len(names) == len(set(names))


def test_doubled_velocity_breaks_kinetic_bound():
    ss = scaled_peakon(PeakonParams(2.0, 2.0), 1.0, 1024)
    bad = ScaledSnapshot(t=ss.t, eta=ss.eta, tY=ss.tY, tU=2 * ss.tU, tPsqrt=ss.tPsqrt, A=ss.A)
    rows = {r.name: r for r in snapshot_rows(bad)}
    assert not rows["kinetic_by_pressure"].passed
    assert rows["kinetic_by_pressure"].worst < -1e-3


def test_numeric_derivatives_keep_the_robust_rows():
    ss = scaled_peakon(PeakonParams(2.0, 2.0), 1.0, 2048)
    rows = {r.name: r for r in scaled_rows(numeric_fieldset(ss))}
    for name in ("pressure_cap", "kinetic_by_pressure", "velocity_cap", "force_by_pressure",
                 "left_integral_upper", "right_integral_upper", "monotone_position"):
        assert rows[name].passed, name


def test_zero_solution_is_vacuous():
    rows = snapshot_rows(zero_scaled(32))
    assert rows and all(r.passed and r.extra.get("vacuous") for r in rows)


def test_source_constant_reported():
    rows = {r.name: r for r in scaled_rows(exact_fieldset(PeakonParams(1.0, 2.0), 0.0, 512))}
    K = rows["source_by_pressure"].extra["K"]
    assert 0 < K < 10

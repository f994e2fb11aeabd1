import math

import numpy as np
import pytest

from qpaving.catalog import (ThetaSeries, a_star_lattice, d_lattice, e8_lattice, e8_theta_series,
                             leech_theta_series, named_lattice, named_theta_pair, theta_series_of,
                             zn_theta_counts, zn_theta_series)
from qpaving.errors import CatalogError
from qpaving.golay import golay_weight_enumerator, leech_shell_count
from qpaving.lattice import Lattice


def test_named_lattice_densities():
    for name in ("Z^2", "hexagonal", "D4", "D8", "A8*", "E8"):
        L = named_lattice(name, 2.0)
        assert isinstance(L, Lattice)
        assert L.density == pytest.approx(2.0, rel=1e-12)
    assert isinstance(named_lattice("Leech"), ThetaSeries)
    with pytest.raises(CatalogError):
        named_lattice("K12")


def test_e8_counts_by_enumeration():
    t = theta_series_of(e8_lattice(), 2.1 ** 2)
    assert dict(zip(t.norms, t.counts)) == {0.0: 1, 2.0: 240, 4.0: 2160}
    exact = e8_theta_series(3)
    full = theta_series_of(e8_lattice(), 6.0)
    assert full.counts == exact.counts


def test_zn_counts():
    assert zn_theta_counts(24, 2)[:3] == [1, 48, 1104]
    t = theta_series_of(named_lattice("Z^4"), 5.0)
    assert list(t.counts) == [c for c in zn_theta_counts(4, 5) if c]


def test_root_lattice_kissing_numbers():
    # D8 has 112 roots, A8* has 18 minimal vectors, D4 has 24
    for L, k in ((d_lattice(8), 112), (d_lattice(4), 24), (a_star_lattice(8), 18)):
        t = theta_series_of(L.with_density(1.0), 3.0)
        assert t.counts[1] == k


def test_dual_tables_of_self_dual_lattices():
    t, td = named_theta_pair("E8", 4.0)
    assert t.counts == td.counts
    t = zn_theta_series(8, 4).scaled_to_density(2.0)
    d = t.dual()
    assert d.covolume_of_table == pytest.approx(2.0)
    assert d.norms[1] == pytest.approx(1 / t.norms[1])


def test_leech_table_checksums():
    t = leech_theta_series()
    assert t.counts[:4] == (1, 196560, 16773120, 398034000)
    assert t.norms[:4] == (0.0, 4.0, 6.0, 8.0)


def test_leech_shells_from_golay():
    assert golay_weight_enumerator() == {0: 1, 8: 759, 12: 2576, 16: 759, 24: 1}
    t = leech_theta_series()
    for n in (0, 2, 4, 6):
        assert leech_shell_count(n) == t.count_at(float(n))


def test_theta_series_validation():
    with pytest.raises(CatalogError):
        ThetaSeries("bad", 2, (0.0, 1.0), (1, 3))
    with pytest.raises(CatalogError):
        ThetaSeries("bad", 2, (1.0,), (1,))
    with pytest.raises(CatalogError):
        ThetaSeries("bad", 2, (0.0, 2.0, 1.0), (1, 2, 2))


def test_scaling_keeps_counts():
    t = e8_theta_series(2).scaled_to_density(4.0)
    assert t.density == pytest.approx(4.0)
    assert t.norms[1] == pytest.approx(2.0 * 4.0 ** (-1 / 4))
    assert math.isclose(np.sum(t.count_array()), 1 + 240 + 2160)

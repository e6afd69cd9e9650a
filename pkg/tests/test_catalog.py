import math

import pytest

from nilprob.catalog import (
    almost_simple_pair,
    alt_group,
    assets_dir,
    cyclic_group,
    dihedral_group,
    group_from_spec,
    load_group_file,
    projective_group,
    sym_group,
)
from nilprob.errors import GroupFormatError, VerificationError


class TestNamedConstructions:
    @pytest.mark.parametrize("n,order", [(1, 1), (2, 2), (3, 6), (4, 24), (5, 120)])
    def test_sym_orders(self, n, order):
        assert sym_group(n).order == order

    @pytest.mark.parametrize("n,order", [(1, 1), (2, 1), (3, 3), (4, 12), (5, 60), (6, 360)])
    def test_alt_orders(self, n, order):
        assert alt_group(n).order == order

    @pytest.mark.parametrize("n", [1, 2, 3, 6, 12])
    def test_cyclic_orders(self, n):
        assert cyclic_group(n).order == n

    @pytest.mark.parametrize("n,order", [(3, 6), (4, 8), (5, 10), (6, 12)])
    def test_dihedral_orders(self, n, order):
        assert dihedral_group(n).order == order

    def test_dihedral_small_n_rejected(self):
        with pytest.raises(GroupFormatError):
            dihedral_group(2)

    @pytest.mark.parametrize("q", [4, 5, 7, 8, 9, 11, 13])
    def test_psl2_orders(self, q):
        G = projective_group(q, "psl2")
        d = math.gcd(2, q - 1)
        assert G.order == q * (q * q - 1) // d
        assert G.degree == q + 1

    @pytest.mark.parametrize("q", [4, 5, 7, 8, 9, 11, 13])
    def test_pgl2_orders(self, q):
        assert projective_group(q, "pgl2").order == q * (q * q - 1)

    @pytest.mark.parametrize("q,k", [(4, 2), (8, 3), (9, 2)])
    def test_pgammal2_orders(self, q, k):
        assert projective_group(q, "pgammal2").order == k * q * (q * q - 1)

    def test_pgammal2_prime_equals_pgl(self):
        assert projective_group(7, "pgammal2").order == \
            projective_group(7, "pgl2").order


class TestSpecGrammar:
    def test_specs_resolve(self):
        assert group_from_spec("sym:4").order == 24
        assert group_from_spec("alt:5").order == 60
        assert group_from_spec("cyc:7").order == 7
        assert group_from_spec("dih:5").order == 10
        assert group_from_spec("psl2:7").order == 168
        assert group_from_spec("pgl2:7").order == 336
        assert group_from_spec("pgammal2:9").order == 1440

    @pytest.mark.parametrize("bad", ["nosuch:3", "sym", "sym:x", "psl2:6", "psl2:16"])
    def test_bad_specs_rejected(self, bad):
        with pytest.raises((GroupFormatError, ValueError)):
            group_from_spec(bad)


class TestAlmostSimplePairs:
    def test_alt5_pair(self):
        pair = almost_simple_pair("alt:5")
        assert pair.ambient.order == 120
        assert pair.socle.order == 60

    def test_alt6_exceptional_ambient(self):
        pair = almost_simple_pair("alt:6")
        assert pair.ambient.order == 1440
        assert pair.socle.order == 360

    def test_psl27_pair(self):
        pair = almost_simple_pair("psl2:7")
        assert pair.ambient.order == 336
        assert pair.socle.order == 168

    def test_small_n_rejected(self):
        with pytest.raises((GroupFormatError, ValueError)):
            almost_simple_pair("alt:4")


class TestGeneratorFiles:
    def test_asset_inventory(self):
        # m11 has no socle lines: the group is its own socle
        expected = {
            "psl33.grp": (11232, 5616),
            "m11.grp": (7920, 7920),
            "psu42.grp": (51840, 25920),
        }
        for name, (ambient_order, socle_order) in expected.items():
            pair = almost_simple_pair(f"file:{name.removesuffix('.grp')}")
            assert pair.ambient.order == ambient_order
            assert pair.socle.order == socle_order
        assert load_group_file(assets_dir() / "m11.grp").socle is None

    @pytest.mark.slow
    def test_large_assets(self):
        pair = almost_simple_pair("file:psl34")
        assert (pair.ambient.order, pair.socle.order) == (241920, 20160)
        pair = almost_simple_pair("file:m12")
        assert (pair.ambient.order, pair.socle.order) == (190080, 95040)
        pair = almost_simple_pair("file:psp62")
        assert (pair.ambient.order, pair.socle.order) == (1451520, 1451520)

    def test_abelian_socle_rejected(self, tmp_path):
        bad = tmp_path / "bad.grp"
        bad.write_text(
            "name bad\n"
            "degree 3\n"
            "order 6\n"
            "socle-order 3\n"
            "gen 2,1,3\n"
            "gen 2,3,1\n"
            "socle-gen 2,3,1\n"
        )
        with pytest.raises(VerificationError):
            load_group_file(bad)

    def test_order_mismatch_rejected(self, tmp_path):
        bad = tmp_path / "bad.grp"
        bad.write_text("name bad\ndegree 3\norder 12\ngen 2,1,3\ngen 2,3,1\n")
        with pytest.raises(VerificationError):
            load_group_file(bad)

    def test_malformed_rejected(self, tmp_path):
        bad = tmp_path / "bad.grp"
        bad.write_text("degree zero\norder 6\ngen 2,1,3\n")
        with pytest.raises(GroupFormatError):
            load_group_file(bad)

    def test_assets_env_override(self, tmp_path, monkeypatch):
        src = (assets_dir() / "m11.grp").read_text()
        (tmp_path / "m11.grp").write_text(src)
        monkeypatch.setenv("NILPROB_ASSETS", str(tmp_path))
        pair = almost_simple_pair("file:m11")
        assert pair.ambient.order == 7920

import numpy as np
import pytest

from srcodec.dictionary import (
    DEFAULT_PROTOTYPES,
    SeparableDictionary,
    build_mixed,
    build_prototype_dict,
    build_trig_cos,
    build_trig_sin,
)


class TestCos:
    def test_first_column_constant(self):
        atoms = build_trig_cos(16, 32)
        assert np.allclose(atoms[:, 0], 1 / np.sqrt(16), atol=1e-12)

    def test_unit_norms(self):
        atoms = build_trig_cos(16, 32)
        assert np.allclose(np.linalg.norm(atoms, axis=0), 1.0, atol=1e-12)

    def test_square_case_is_orthonormal_dct(self):
        atoms = build_trig_cos(16, 16)
        assert np.max(np.abs(atoms.T @ atoms - np.eye(16))) < 1e-10


class TestSin:
    def test_last_column_alternates(self):
        atoms = build_trig_sin(16, 16)
        expected = np.array([(-1) ** i / np.sqrt(16) for i in range(16)])
        assert np.allclose(atoms[:, -1], expected, atol=1e-12)

    def test_unit_norms(self):
        atoms = build_trig_sin(16, 32)
        assert np.allclose(np.linalg.norm(atoms, axis=0), 1.0, atol=1e-12)

    def test_no_zero_columns(self):
        atoms = build_trig_sin(16, 32)
        assert np.all(np.max(np.abs(atoms), axis=0) > 1e-12)


class TestPrototypes:
    def test_pulse_gives_standard_basis(self):
        atoms = build_prototype_dict(5, [np.array([1.0])])
        assert np.allclose(atoms, np.eye(5), atol=1e-15)

    def test_flat_prototype_at_origin(self):
        atoms = build_prototype_dict(6, [np.ones(3)])
        first = atoms[:, 0]
        assert np.allclose(first[:3], 1 / np.sqrt(3), atol=1e-12)
        assert np.all(first[3:] == 0)

    def test_column_count(self):
        protos = [np.ones(1), np.ones(5), np.ones(7)]
        atoms = build_prototype_dict(16, protos)
        expected = sum(16 - len(p) + 1 for p in protos)
        assert atoms.shape == (16, expected)

    def test_oversized_prototype_rejected(self):
        with pytest.raises(ValueError, match="support"):
            build_prototype_dict(4, [np.ones(5)])

    def test_empty_prototype_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            build_prototype_dict(4, [np.array([])])


class TestMixed:
    def test_default_size(self):
        dic = build_mixed(16, 2)
        protos = sum(16 - len(p) + 1 for p in DEFAULT_PROTOTYPES)
        assert dic.m_x == 2 * 16 * 2 + protos  # no duplicates among defaults
        assert dic.m_y == dic.m_x

    def test_unit_norms(self):
        dic = build_mixed(16, 2)
        assert np.allclose(np.linalg.norm(dic.atoms_x, axis=0), 1.0, atol=1e-12)

    def test_no_duplicate_columns(self):
        dic = build_mixed(16, 2)
        gram = np.abs(dic.atoms_x.T @ dic.atoms_x)
        np.fill_diagonal(gram, 0.0)
        assert gram.max() < 1.0 - 1e-10

    def test_spans_block_space(self):
        dic = build_mixed(16, 2)
        assert np.linalg.matrix_rank(dic.atoms_x) == 16

    def test_deterministic(self):
        a = build_mixed(16, 2)
        b = build_mixed(16, 2)
        assert np.array_equal(a.atoms_x, b.atoms_x)
        assert a.atoms_x.tobytes() == b.atoms_x.tobytes()

    def test_dedup_drops_later_duplicates(self):
        atoms = build_prototype_dict(4, [np.array([1.0]), np.array([2.0])])
        # both prototypes normalise to identical pulse columns
        from srcodec.dictionary import _dedup_columns

        deduped, tags = _dedup_columns(atoms, tuple(range(atoms.shape[1])))
        assert deduped.shape == (4, 4)
        assert tags == (0, 1, 2, 3)


def test_custom_dictionary_container():
    ax = build_trig_cos(4, 3)
    dic = SeparableDictionary(atoms_x=ax, atoms_y=ax.copy())
    assert dic.block_side == 4 and dic.m_x == 3 and dic.m_y == 3

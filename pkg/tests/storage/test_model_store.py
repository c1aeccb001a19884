"""
Tests for the binary model file format
"""
import numpy as np
import pytest

from engine.network import reconstruct
from models.normalizer import Normalizer
from storage.model_store import model_store, save_model, load_model
from utils.errors import CorruptionError, DataError, FormatError


@pytest.fixture
def stored_model(toy_model):
    return toy_model.with_normalizer(Normalizer({'cpu': (0.1, 1.0 / 3.0), 'mem-1': (-2.5, 7.0)}))


class TestModelStore:

    def test_round_trip_is_bit_exact(self, stored_model, tmp_path):
        first = save_model(stored_model, str(tmp_path / "first.fae"))
        loaded = load_model(first)
        second = save_model(loaded, str(tmp_path / "second.fae"))
        assert open(first, 'rb').read() == open(second, 'rb').read()
        for name, weights in stored_model.weights().items():
            assert loaded.weights()[name].tobytes() == weights.tobytes()
        assert loaded.normalizer == stored_model.normalizer
        assert loaded.hyper.to_dict()['N'] == stored_model.hyper.depth

    def test_loaded_model_reconstructs_identically(self, stored_model, tmp_path):
        loaded = load_model(save_model(stored_model, str(tmp_path / "m.fae")))
        window = np.sin(np.arange(16) / 2.0)[np.newaxis, :]
        before, after = reconstruct(stored_model, window), reconstruct(loaded, window)
        np.testing.assert_array_equal(before[0], after[0])
        np.testing.assert_array_equal(before[1], after[1])

    def test_header_starts_with_magic(self, stored_model):
        data = model_store.to_bytes(stored_model)
        assert data.startswith(b"FAE1T=16\nJ=2\nU=4\nF=2\nN=4\n")
        assert b"norm.cpu=0.10000000000000001,0.33333333333333331\n" in data

    def test_truncated_payload(self, stored_model, tmp_path):
        path = tmp_path / "cut.fae"
        path.write_bytes(model_store.to_bytes(stored_model)[:-8])
        with pytest.raises(CorruptionError):
            load_model(str(path))

    def test_bad_magic(self, stored_model):
        with pytest.raises(FormatError):
            model_store.from_bytes(b"XXXX" + model_store.to_bytes(stored_model)[4:])

    def test_unknown_header_key(self, stored_model):
        data = model_store.to_bytes(stored_model).replace(b"beta=", b"gamma=", 1)
        with pytest.raises(FormatError, match="gamma"):
            model_store.from_bytes(data)

    def test_contradictory_depth(self, stored_model):
        data = model_store.to_bytes(stored_model).replace(b"N=4", b"N=5", 1)
        with pytest.raises(FormatError):
            model_store.from_bytes(data)

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataError):
            load_model(str(tmp_path / "absent.fae"))

import os

import numpy as np
import pytest

from crawlnet import Network, NetworkConfig, feedforward, init_network
from crawlnet.store import ModelFormatError, ModelMetadata, dumps, load, loads, save


def _nets(n=100):
    for i in range(n):
        yield init_network(NetworkConfig(hidden_size=(1, 2, 20, 25)[i % 4], seed=1000 + i))


META = ModelMetadata(targets=(90.0, 120.0), tolerance_deg=1.0, learning_rate=0.8,
                     generations_used=148, denorm_mode="affine", seed=7, input_value=0.123456789)


def test_round_trip_with_metadata(tmp_path):
    net = init_network(NetworkConfig(hidden_size=3, seed=5))
    path = tmp_path / "m.model"
    save(net, path, META)
    back, meta = load(path)
    assert back == net
    assert meta == META


def test_round_trip_many(tmp_path):
    for net in _nets():
        path = tmp_path / "m.model"
        save(net, path)
        back, _ = load(path)
        np.testing.assert_array_equal(back.to_vector(), net.to_vector())


def test_awkward_floats_survive():
    vec = np.array([0.1, -1e-300, 5e-324, 1 / 3, -0.0, 1.0 - 2**-53, 2.5, 1e308, -7.0, 3e-17])
    net = Network.from_vector(2, vec)
    back, _ = loads(dumps(net))
    assert back.to_vector().tobytes() == net.to_vector().tobytes()


def test_no_temp_left_behind(tmp_path):
    save(init_network(NetworkConfig(hidden_size=2)), tmp_path / "m.model")
    assert os.listdir(tmp_path) == ["m.model"]


def test_overwrite(tmp_path):
    path = tmp_path / "m.model"
    save(init_network(NetworkConfig(hidden_size=2, seed=1)), path)
    second = init_network(NetworkConfig(hidden_size=4, seed=2))
    save(second, path)
    assert load(path)[0] == second


@pytest.mark.skipif(os.geteuid() == 0, reason="root ignores directory permissions")
def test_read_only_dir(tmp_path):
    ro = tmp_path / "ro"
    ro.mkdir()
    ro.chmod(0o500)
    try:
        with pytest.raises(OSError, match="ro"):
            save(init_network(NetworkConfig(hidden_size=2)), ro / "m.model")
        assert os.listdir(ro) == []
    finally:
        ro.chmod(0o700)


def test_failed_rename_cleans_up(tmp_path, monkeypatch):
    def boom(src, dst):
        raise PermissionError(13, "Permission denied")

    monkeypatch.setattr(os, "replace", boom)
    with pytest.raises(OSError, match="m.model"):
        save(init_network(NetworkConfig(hidden_size=2)), tmp_path / "m.model")
    assert os.listdir(tmp_path) == []


def test_missing_directory(tmp_path):
    with pytest.raises(OSError, match="nope"):
        save(init_network(NetworkConfig(hidden_size=2)), tmp_path / "nope" / "m.model")
    assert os.listdir(tmp_path) == []


def test_refuses_non_finite(tmp_path):
    net = init_network(NetworkConfig(hidden_size=2))
    net.w_ho[1, 0] = np.nan
    with pytest.raises(ValueError, match="non-finite"):
        save(net, tmp_path / "m.model")
    assert not (tmp_path / "m.model").exists()


def test_missing_file(tmp_path):
    with pytest.raises(OSError):
        load(tmp_path / "absent.model")


def test_truncated_names_line():
    text = dumps(init_network(NetworkConfig(hidden_size=2)), META)
    lines = text.splitlines()
    with pytest.raises(ModelFormatError, match=f"line {len(lines)}: file ends early"):
        loads("\n".join(lines[:-1]) + "\n")


def test_truncated_mid_line():
    text = dumps(init_network(NetworkConfig(hidden_size=2)))
    with pytest.raises(ModelFormatError, match=r"line 9: b_o has 1 values"):
        loads(text[: text.rindex(" ")] + "\n")


def test_bias_count_mismatch():
    text = dumps(init_network(NetworkConfig(hidden_size=3)))
    lines = text.splitlines()
    i = next(k for k, l in enumerate(lines) if l.startswith("b_h "))
    lines[i] = " ".join(lines[i].split()[:3])
    with pytest.raises(ModelFormatError, match="b_h has 2 values, expected 3"):
        loads("\n".join(lines))


def test_version_mismatch():
    text = dumps(init_network(NetworkConfig(hidden_size=2))).replace("format_version 1", "format_version 9")
    with pytest.raises(ModelFormatError, match="format_version 9"):
        loads(text)


@pytest.mark.parametrize("bad,match", [
    ("w_ih 0.1 nan", "non-finite"),
    ("w_ih 0.1 zzz", "not a number"),
])
def test_bad_values(bad, match):
    lines = dumps(init_network(NetworkConfig(hidden_size=2))).splitlines()
    i = next(k for k, l in enumerate(lines) if l.startswith("w_ih "))
    lines[i] = bad
    with pytest.raises(ModelFormatError, match=match):
        loads("\n".join(lines))


def test_wrong_header():
    with pytest.raises(ModelFormatError, match="line 1"):
        loads("something else\n")


def test_feedforward_bit_identical(tmp_path):
    rng = np.random.default_rng(0)
    for net in _nets(20):
        save(net, tmp_path / "m.model")
        back, _ = load(tmp_path / "m.model")
        for x in rng.uniform(-2, 2, size=5):
            a, b = feedforward(net, x), feedforward(back, x)
            assert a.output.tobytes() == b.output.tobytes()
            assert a.hidden_pre.tobytes() == b.hidden_pre.tobytes()

# Copyright 2026 The Harmonize Authors.
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
import numpy as np
import pytest

import harmonize as hz


@pytest.fixture(scope="module")
def table():
    return hz.generate_synthetic(rows=3000, features=16, seed=3)


def test_synthetic_shapes(table):
    assert table["features"].shape == (3000, 16)
    assert set(table["labels"]) == {"p1", "u1", "p2", "u2"}
    for column in table["labels"].values():
        assert column.shape == (3000,)
        assert 0.4 <= column.mean() <= 0.6
    again = hz.generate_synthetic(rows=3000, features=16, seed=3)
    np.testing.assert_array_equal(table["features"], again["features"])


def test_metrics():
    assert hz.accuracy(np.array([0.9, 0.2, 0.6]), np.array([1, 0, 0])) == pytest.approx(2 / 3)
    assert hz.auroc(np.array([0.1, 0.4, 0.35, 0.8]), np.array([0, 0, 1, 1])) == pytest.approx(0.75)
    assert hz.privacy_leakage(0.6, 0.9) == pytest.approx(0.25)
    assert hz.utility_performance(0.85, 0.9) == pytest.approx(0.875)
    assert hz.tradeoff(0.2, 0.9) == pytest.approx(0.2 / 0.9001)
    with pytest.raises(hz.MetricError):
        hz.privacy_leakage(0.7, 0.5)
    with pytest.raises(hz.DataError):
        hz.auroc(np.array([0.1, 0.2]), np.array([1, 1]))


def test_mutual_information(table):
    y = table["labels"]["p1"]
    informative = hz.estimate_mi(table["features"], y)
    rng = np.random.default_rng(0)
    noise = hz.estimate_mi(rng.normal(size=(3000, 4)), y)
    assert informative > 0.05
    assert noise < 0.05


def test_train_sanitize_roundtrip(table, tmp_path):
    x = table["features"]
    mech = hz.train_mechanism(x, table["labels"]["p1"], table["labels"]["u1"],
                              variant="uae-pupet", epochs=1, batch_size=256, seed=4)
    assert mech.variant == "uae-pupet"
    assert mech.input_dim == 16
    out = mech.sanitize(x, seed=9)
    assert out.shape == x.shape
    assert np.isfinite(out).all()
    np.testing.assert_array_equal(out, mech.sanitize(x, seed=9))

    mech.save(tmp_path / "m")
    loaded = hz.load_mechanism(tmp_path / "m")
    np.testing.assert_array_equal(loaded.sanitize(x, seed=9), out)


def test_bad_settings(table):
    x = table["features"]
    with pytest.raises(hz.ConfigError):
        hz.train_mechanism(x, table["labels"]["p1"], table["labels"]["u1"], epochs=1, gamma=2)
    with pytest.raises(hz.ConfigError):
        hz.train_mechanism(x, table["labels"]["p1"], table["labels"]["u1"], batch_size=0)
    with pytest.raises(hz.ConfigError):
        hz.train_mechanism(x, table["labels"]["p1"], table["labels"]["u1"], variant="gan")


def test_repetition_report():
    result = hz.run_repetition(rows=7200, rounds=1, seed=2, epochs=2)
    assert result["selected_iteration"] == 1
    metrics = result["metrics"]
    for key in ("T_g1", "T_g2", "G1.p1.M", "G2.u2.M", "G1.p1.mi_sanitized"):
        assert np.isfinite(metrics[key])
    assert metrics["T_g1"] == pytest.approx(
        hz.tradeoff(metrics["G1.p1.M"], metrics["G1.u1.M"]), rel=1e-9)
    assert set(result["report"]) >= {"G1", "G2", "T_g1", "T_g2"}

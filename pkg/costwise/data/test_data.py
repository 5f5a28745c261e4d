import numpy as np
import pytest

from costwise.data import (
    CohortConfig,
    generate,
    make_training_set,
    meta_path,
    read_cohort_csv,
    split,
    windows_dataset,
    write_cohort_csv,
)
from costwise.errors import DataError

SMALL = CohortConfig(n_pos=30, n_neg=60, n_windows=12, horizon=4)


@pytest.fixture(scope="module")
def cohort(icu):
    return generate(icu, seed=3, cfg=SMALL)


def test_generate_counts_and_columns(cohort, icu):
    assert len(cohort.positives) == 30 and len(cohort.negatives) == 60
    assert cohort.feature_names == tuple(icu.features)
    for p in cohort.positives:
        assert 0 < p.event_time <= 11
        assert p.X.shape == (p.event_time, len(icu.features))
    for p in cohort.negatives:
        assert p.event_time is None and p.X.shape[0] == 12


def test_generate_is_deterministic(icu):
    a = generate(icu, seed=9, cfg=SMALL)
    b = generate(icu, seed=9, cfg=SMALL)
    assert [p.id for p in a.patients] == [p.id for p in b.patients]
    for pa, pb in zip(a.patients, b.patients):
        np.testing.assert_array_equal(pa.X, pb.X)
        assert pa.event_time == pb.event_time


def test_generate_all_negative(tiny):
    c = generate(tiny, n_pos=0, n_neg=5, seed=1)
    assert len(c.patients) == 5 and not c.positives
    assert set(c.beta_star) == {"f1", "f2"}


def test_window_labels_follow_event_time(cohort):
    p = cohort.positives[0]
    labels = p.labels(cohort.horizon)
    e = p.event_time
    for t, lab in enumerate(labels):
        assert lab == (1.0 if e - cohort.horizon <= t < e else -1.0)


def test_split_partitions_patients(cohort):
    train, test = split(cohort, 0.75, seed=0)
    a, b = {p.id for p in train.patients}, {p.id for p in test.patients}
    assert not a & b
    assert a | b == {p.id for p in cohort.patients}
    assert len(train.positives) == round(0.75 * 30)
    again, _ = split(cohort, 0.75, seed=0)
    assert [p.id for p in again.patients] == [p.id for p in train.patients]


def test_training_set_is_balanced(cohort):
    train, _ = split(cohort, seed=0)
    data = make_training_set(train, seed=0)
    assert (data.y > 0).sum() == (data.y < 0).sum()
    assert set(data.patient_ids) <= {p.id for p in train.patients}


def test_training_set_needs_positives(tiny):
    c = generate(tiny, n_pos=0, n_neg=4, seed=1)
    with pytest.raises(DataError, match="no positive"):
        make_training_set(c, seed=0)


def test_csv_roundtrip(cohort, tmp_path):
    path = write_cohort_csv(cohort, tmp_path / "cohort.csv")
    back = read_cohort_csv(path)
    assert back.feature_names == cohort.feature_names
    assert back.horizon == cohort.horizon
    assert (back.seed, back.noise) == (cohort.seed, cohort.noise)
    assert back.beta_star == cohort.beta_star
    assert [p.id for p in back.patients] == [p.id for p in cohort.patients]
    for a, b in zip(cohort.patients, back.patients):
        assert a.event_time == b.event_time
        np.testing.assert_array_equal(a.X, b.X)
    np.testing.assert_array_equal(windows_dataset(back).y, windows_dataset(cohort).y)


def test_csv_rejects_bad_files(cohort, tmp_path):
    with pytest.raises(DataError):
        read_cohort_csv(tmp_path / "none.csv", horizon=4)
    path = write_cohort_csv(cohort, tmp_path / "cohort.csv")
    with pytest.raises(DataError, match="disagree"):
        read_cohort_csv(path, horizon=2)
    bad = tmp_path / "bad.csv"
    bad.write_text("patient_id,window,label\np1,0,1\n")
    with pytest.raises(DataError, match="event_time"):
        read_cohort_csv(bad, horizon=4)


def test_csv_keeps_generation_settings(tiny, tmp_path):
    c = generate(tiny, n_pos=3, n_neg=3, seed=4, cfg=CohortConfig(planted={"f1": 1.0, "f2": 1.0}, noise=0.5, horizon=3))
    back = read_cohort_csv(write_cohort_csv(c, tmp_path / "c.csv"))
    assert (back.seed, back.beta_star, back.noise, back.horizon) == (4, {"f1": 1.0, "f2": 1.0}, 0.5, 3)


def test_csv_horizon_without_sidecar(cohort, tmp_path):
    path = write_cohort_csv(cohort, tmp_path / "cohort.csv")
    meta_path(path).unlink()
    with pytest.raises(DataError, match="no horizon"):
        read_cohort_csv(path)
    back = read_cohort_csv(path, horizon=cohort.horizon)
    assert back.seed is None and back.beta_star == {}


def test_csv_rejects_malformed_sidecar(cohort, tmp_path):
    path = write_cohort_csv(cohort, tmp_path / "cohort.csv")
    meta_path(path).write_text('{"horizon": 0}')
    with pytest.raises(DataError, match="horizon"):
        read_cohort_csv(path)

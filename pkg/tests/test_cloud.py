import csv
import json
import math

import numpy as np
import pytest

from shgeo.cloud import (
    EXPORT_COLUMNS,
    FrontCloud,
    GridSpec,
    export,
    self_intersections,
    sphere,
    wavefront,
)
from shgeo.elliptic import DomainError, complete_K
from shgeo.expmap import exp, rectify
from shgeo.phase import CaseId
from shgeo.strata import cut_time_upper_bound

GRID = GridSpec(n_k=24, n_phi=48)


@pytest.fixture(scope="module")
def front2():
    return wavefront(2.0, GRID)


def test_gridspec_validation():
    with pytest.raises(DomainError):
        GridSpec(n_k=1, n_phi=10)
    with pytest.raises(DomainError):
        GridSpec(n_k=10, n_phi=10, c3_span=0.0)
    ks = GridSpec(n_k=50, n_phi=4).k_values()
    assert 0.0 < ks[0] and ks[-1] < 1.0
    assert np.all(np.diff(ks) > 0.0)


def test_wavefront_rejects_bad_radius():
    with pytest.raises(DomainError):
        wavefront(0.0, GRID)
    with pytest.raises(DomainError):
        sphere(-1.0, GRID)


def test_rest_strata_points_present(front2):
    pts = front2.points()
    for target in ((0.0, 2.0, 0.0), (0.0, -2.0, 0.0), (0.0, 0.0, 2.0), (0.0, 0.0, -2.0)):
        d = np.min(np.linalg.norm(pts - np.array(target), axis=1))
        assert d <= 1e-12


def test_points_recompute_exactly(front2):
    rng = np.random.default_rng(3)
    for i in rng.choice(len(front2), size=60, replace=False):
        p = front2[int(i)]
        q = exp(front2.case_of(int(i)), p.t)
        r1, r2 = rectify(q)
        assert abs(r1 - p.r1) <= 1e-12
        assert abs(r2 - p.r2) <= 1e-12
        assert abs(q.z - p.z) <= 1e-12


def test_sign_flip_symmetry(front2):
    # the two C1 sign blocks are identical grids; flipping s1 negates x and z,
    # which in rectifying coordinates means (r1, r2, z) -> (r1, -r2, -z)
    mask_p = (front2.case_code == 1) & (front2.s1 == 1)
    mask_m = (front2.case_code == 1) & (front2.s1 == -1)
    a = front2.select(mask_p)
    b = front2.select(mask_m)
    assert len(a) == len(b) > 0
    assert np.array_equal(a.r1, b.r1)
    assert np.array_equal(a.r2, -b.r2)
    assert np.array_equal(a.z, -b.z)


def test_sphere_is_subset(front2):
    sp = sphere(2.0, GRID)
    assert 0 < len(sp) < len(front2)
    rows = {
        (float(r1), float(r2), float(z))
        for r1, r2, z in zip(front2.r1, front2.r2, front2.z)
    }
    for r1, r2, z in zip(sp.r1, sp.r2, sp.z):
        assert (float(r1), float(r2), float(z)) in rows


def test_sphere_filter_uses_cut_bound():
    R = 7.0
    sp = sphere(R, GRID)
    for i in range(0, len(sp), 97):
        assert cut_time_upper_bound(sp.case_of(i)) >= R
    # C3 carries an infinite bound, so its points always survive
    assert np.any(sp.case_code == 3)
    # every excluded covector really has a bound below R
    full = wavefront(R, GRID)
    assert len(sp) < len(full)


def test_deterministic_csv(tmp_path, front2):
    p1 = tmp_path / "a.csv"
    p2 = tmp_path / "b.csv"
    assert export(front2, "csv", str(p1)) == len(front2)
    assert export(wavefront(2.0, GRID), "csv", str(p2)) == len(front2)
    assert p1.read_bytes() == p2.read_bytes()


def test_csv_round_trip(tmp_path, front2):
    path = tmp_path / "cloud.csv"
    export(front2, "csv", str(path))
    with open(path) as fh:
        reader = csv.reader(fh)
        header = next(reader)
        assert tuple(header) == EXPORT_COLUMNS
        row = next(reader)
    p = front2[0]
    assert float(row[0]) == p.r1
    assert float(row[1]) == p.r2
    assert float(row[2]) == p.z
    assert row[3] == p.case_id.value
    assert float(row[4]) == p.k
    assert int(row[6]) == p.s1


def test_empty_cloud_exports_header_only(tmp_path, front2):
    empty = front2.select(np.zeros(len(front2), dtype=bool))
    path = tmp_path / "empty.csv"
    assert export(empty, "csv", str(path)) == 0
    lines = path.read_text().splitlines()
    assert lines == [",".join(EXPORT_COLUMNS)]


def test_ply_vertex_count(tmp_path, front2):
    path = tmp_path / "cloud.ply"
    export(front2, "ply", str(path))
    text = path.read_text().splitlines()
    assert text[0] == "ply"
    assert f"element vertex {len(front2)}" in text
    header_end = text.index("end_header")
    assert len(text) - header_end - 1 == len(front2)


def test_json_records(tmp_path, front2):
    path = tmp_path / "cloud.json"
    export(front2, "json", str(path))
    with open(path) as fh:
        records = json.load(fh)
    assert len(records) == len(front2)
    assert set(records[0]) == set(EXPORT_COLUMNS)


def test_unknown_format_rejected(tmp_path, front2):
    with pytest.raises(DomainError):
        export(front2, "vtk", str(tmp_path / "x.vtk"))


def test_cloud_sequence_protocol(front2):
    assert len(front2) > 0
    p = front2[0]
    assert isinstance(p.case_id, CaseId)
    with pytest.raises(TypeError):
        front2[0:5]


def test_self_intersections_concentrate_on_planes():
    cloud = wavefront(2.0, GridSpec(n_k=80, n_phi=160))
    rep = self_intersections(cloud, eps=1e-3)
    assert rep.pairs.shape[0] > 0
    assert np.max(rep.plane_distance) <= 1e-2
    summary = rep.summary()
    assert summary["pair_count"] == rep.pairs.shape[0]
    assert summary["cluster_count"] >= 1
    for cl in summary["clusters"]:
        assert cl["max_plane_distance"] <= 1e-2


def test_self_intersections_empty_when_tight():
    cloud = wavefront(0.5, GridSpec(n_k=12, n_phi=24))
    rep = self_intersections(cloud, eps=1e-9)
    assert rep.pairs.shape[0] == 0
    assert rep.summary()["cluster_count"] == 0

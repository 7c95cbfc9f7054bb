import json

import numpy as np
import pytest

from polyode.errors import ConstraintNotSatisfied, ValidationError
from polyode.generate import generate_random_instance
from polyode.serialization import (
    parse_instance_file,
    parse_system_file,
    read_trajectory_csv,
    system_from_dict,
    write_instance_file,
    write_system_file,
    write_trajectory_csv,
)
from polyode.trajectory import Trajectory

from test_polysys import random_system


class TestSystemFormat:
    def test_minimal_round_trip(self, tmp_path):
        doc = {
            "n": 2,
            "m": 2,
            "coefficients": [{"eq": 1, "exponents": [2, 0], "re": 1.0, "im": 0.0}],
        }
        path = tmp_path / "sys.json"
        path.write_text(json.dumps(doc))
        system = parse_system_file(path)
        assert system.coefficients == {(1, (2, 0)): 1 + 0j}

    def test_rejects_wrong_exponent_sum(self, tmp_path):
        doc = {
            "n": 2,
            "m": 4,
            "coefficients": [{"eq": 1, "exponents": [3, 0], "re": 1.0, "im": 0.0}],
        }
        path = tmp_path / "sys.json"
        path.write_text(json.dumps(doc))
        with pytest.raises(ValidationError):
            parse_system_file(path)

    def test_rejects_duplicate_keys(self):
        doc = {
            "n": 2,
            "m": 2,
            "coefficients": [
                {"eq": 1, "exponents": [2, 0], "re": 1.0, "im": 0.0},
                {"eq": 1, "exponents": [2, 0], "re": 2.0, "im": 0.0},
            ],
        }
        with pytest.raises(ValidationError):
            system_from_dict(doc)

    def test_rejects_small_n(self):
        with pytest.raises(ValidationError):
            system_from_dict({"n": 1, "m": 4, "coefficients": []})

    def test_rejects_non_json(self, tmp_path):
        path = tmp_path / "sys.json"
        path.write_text("not json")
        with pytest.raises(ValidationError):
            parse_system_file(path)

    def test_random_round_trip_bit_exact(self, tmp_path):
        rng = np.random.default_rng(17)
        system = random_system(rng, 2, 4)
        path = tmp_path / "sys.json"
        write_system_file(system, path)
        again = parse_system_file(path)
        assert again.coefficients == system.coefficients
        assert (again.n, again.m) == (system.n, system.m)


class TestInstanceFormat:
    def test_round_trip_bit_exact(self, tmp_path):
        instance = generate_random_instance(2, 4, 23)
        path = tmp_path / "inst.json"
        write_instance_file(instance, path)
        again = parse_instance_file(path)
        assert np.array_equal(again.z0, instance.z0)
        assert again.k == instance.k
        assert again.system.coefficients == instance.system.coefficients

    def test_rejects_inconsistent_instance(self, tmp_path):
        instance = generate_random_instance(2, 4, 23)
        path = tmp_path / "inst.json"
        write_instance_file(instance, path)
        doc = json.loads(path.read_text())
        doc["k"] = [doc["k"][0] + 0.5, doc["k"][1]]
        path.write_text(json.dumps(doc))
        with pytest.raises(ConstraintNotSatisfied):
            parse_instance_file(path)


class TestTrajectoryCsv:
    def test_round_trip_last_digit(self, tmp_path):
        rng = np.random.default_rng(3)
        times = np.sort(rng.uniform(0, 1, 16))
        times[0] = 0.0
        states = rng.standard_normal((16, 2)) + 1j * rng.standard_normal((16, 2))
        traj = Trajectory(times, states, "closed-form")
        path = tmp_path / "traj.csv"
        write_trajectory_csv(traj, path)
        t2, s2 = read_trajectory_csv(path)
        assert np.array_equal(t2, times)
        assert np.array_equal(s2, states)

    def test_headers(self, tmp_path):
        times = np.array([0.0, 1.0])
        states = np.zeros((2, 2), dtype=complex)
        states[:, 0] = 1  # keep strictly increasing times, nonzero data
        path = tmp_path / "a.csv"
        write_trajectory_csv(Trajectory(times, states, "closed-form"), path)
        assert path.read_text().splitlines()[0] == "t,re_z1,im_z1,re_z2,im_z2"
        write_trajectory_csv(Trajectory(times, states, "closed-form"), path, periodic=True)
        assert path.read_text().splitlines()[0] == "t,x1,y1,x2,y2"

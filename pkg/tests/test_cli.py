from gradedev import *
from gradedev.cli import main, load_experiment, rate_from_config, resolve_source
import pytest
import numpy as np
from pathlib import Path
logger.setLevel(logging.CRITICAL+1)


@pytest.fixture
def rate_config(tmp_path):
    def make(**params):
        path = tmp_path / f'rate_{params["kind"]}.json'
        write_json({"command": "rate", **params}, str(path))
        return str(path)

    return make


class TestLoadExperiment:
    def test_shipped(self):
        cfg = load_experiment("kolmogorov_b2")
        assert cfg.command == "sweep"
        assert cfg.name == "kolmogorov_b2"
        assert cfg["eps_grid"] == [0.5, 0.4, 0.3, 0.25]

    def test_unknown_key(self):
        with pytest.raises(SchemaError, match="colour"):
            load_experiment(
                {"command": "sweep", "system": "kolmogorov", "event": b2_event().to_dict(), "eps_grid": [1], "colour": 1}
            )

    def test_missing_key(self):
        with pytest.raises(SchemaError):
            load_experiment({"command": "sweep", "system": "kolmogorov", "event": b2_event().to_dict()})

    def test_bad_values(self):
        base = {"command": "sweep", "system": "kolmogorov", "event": b2_event().to_dict(), "eps_grid": [0.5, 0.4, 0.3]}
        with pytest.raises(SchemaError):
            load_experiment({**base, "estimator": "guess"})
        with pytest.raises(SchemaError):
            load_experiment({**base, "eps_grid": "small"})
        with pytest.raises(SchemaError):
            load_experiment({**base, "event": {"constraints": [], "colour": "red"}})

    def test_command_mismatch(self):
        with pytest.raises(SchemaError):
            load_experiment("kolmogorov_b2", command="rate")
        with pytest.raises(SchemaError):
            load_experiment({"kind": "kolmogorov", "x1": 1, "x2": 1, "eps": 1})

    def test_resolve_source(self):
        assert isinstance(resolve_source("kolmogorov"), GaussianEndpointModel)
        assert isinstance(resolve_source("kolmogorov", sampler="paths"), DiffusionSystem)
        assert isinstance(resolve_source("solvable"), DiffusionSystem)
        assert isinstance(resolve_source("heisenberg", frame="exp"), LieAlgebraSpec)


class TestGradeCommand:
    def test_grade(self, tmp_path):
        out = str(tmp_path / "grade.json")
        assert main(["grade", "--m", "1", "--r", "2", "--out", out]) == EXIT_OK
        d = read_json(out)
        assert d["grades"] == ["1", "3"]
        assert TIMESTAMP_KEY in d

    def test_stdout(self, capsys):
        assert main(["grade", "--m", "2", "--r", "1", "--no-timestamp"]) == EXIT_OK
        d = json.loads(capsys.readouterr().out)
        assert d["grades"] == ["1"]
        assert TIMESTAMP_KEY not in d

    def test_size_cap(self):
        assert main(["grade", "--m", "1", "--r", "99"]) == EXIT_NUMERIC

    def test_bad_channels(self):
        assert main(["grade", "--m", "0", "--r", "2"]) == EXIT_SCHEMA


class TestFlagCommand:
    @pytest.mark.parametrize("name, grades", [("kolmogorov", ["1", "3"]), ("heisenberg", ["1"])])
    def test_bundled(self, tmp_path, name, grades):
        out = str(tmp_path / f"{name}.json")
        assert main(["flag", name, "--out", out]) == EXIT_OK
        assert read_json(out)["grades"] == grades

    def test_shear(self, tmp_path):
        a, b = str(tmp_path / "a.json"), str(tmp_path / "b.json")
        main(["flag", "kolmogorov", "--out", a, "--no-timestamp"])
        main(["flag", "kolmogorov", "--shear", "5", "--out", b, "--no-timestamp"])
        assert read_json(a)["grades"] == read_json(b)["grades"]

    def test_corrupted(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        assert main(["flag", str(path)]) == EXIT_SCHEMA

    def test_missing(self):
        assert main(["flag", "no_such_algebra"]) == EXIT_SCHEMA

    def test_not_a_lie_algebra(self, tmp_path):
        d = algebra_to_dict(load_algebra("kolmogorov"))
        d["fields"][2] = [[0, [0, 0], 1.0]]
        path = str(tmp_path / "bad.json")
        write_json(d, path)
        assert main(["flag", path]) == EXIT_NUMERIC


class TestRateCommand:
    def test_kolmogorov(self, tmp_path, rate_config):
        out, csv = str(tmp_path / "rate.json"), str(tmp_path / "rate.csv")
        cfg = rate_config(kind="kolmogorov", x1=1.0, x2=1.0, eps=1.0)
        assert main(["rate", cfg, "--out", out, "--csv", csv]) == EXIT_OK
        assert read_json(out)["value"] == pytest.approx(2.0)
        df = read_csv(csv)
        assert len(df) == len(RATE_GRID)
        assert df.h1.iloc[-1] == pytest.approx(1.0)

    def test_graded(self, tmp_path, rate_config):
        out = str(tmp_path / "graded.json")
        cfg = rate_config(kind="graded", algebra="kolmogorov", k=2, event=b2_event("exp").to_dict(), include_drift=True)
        assert main(["rate", cfg, "--out", out]) == EXIT_OK
        d = read_json(out)
        assert d["alpha"] == "3"
        assert d["cl_value"] == pytest.approx(1.5)

    def test_infinite_rate(self, tmp_path, rate_config):
        out = str(tmp_path / "graded.json")
        cfg = rate_config(kind="graded", algebra="kolmogorov", k=1, event=b2_event("exp").to_dict())
        assert main(["rate", cfg, "--out", out]) == EXIT_OK
        assert read_json(out)["cl_value"] == "inf"

    def test_rkhs(self, tmp_path, rate_config):
        out = str(tmp_path / "rkhs.json")
        constraints = [{"terms": [{"kind": "integral"}], "relation": ">=", "target": 1.0}]
        assert main(["rate", rate_config(kind="rkhs", constraints=constraints), "--out", out]) == EXIT_OK
        assert read_json(out)["value"] == pytest.approx(1.5)

    def test_generic(self, tmp_path, rate_config):
        out, csv = str(tmp_path / "generic.json"), str(tmp_path / "generic.csv")
        cfg = rate_config(kind="generic", system="kolmogorov", event=b2_event().to_dict(), knots=16, restarts=2)
        assert main(["rate", cfg, "--out", out, "--csv", csv]) == EXIT_OK
        d = read_json(out)
        assert d["method"] == "generic"
        assert d["value"] == pytest.approx(1.5, rel=0.01)
        df = read_csv(csv)
        assert list(df.columns) == ["t", "h1", "x1", "x2"]
        assert df.x2.iloc[-1] == pytest.approx(1.0, abs=1e-4)

    def test_infeasible(self, rate_config):
        zero = {"kernel": {"breaks": [0.0, 1.0], "pieces": [[0.0]]}, "relation": ">=", "target": 1.0}
        assert main(["rate", rate_config(kind="rkhs", constraints=[zero])]) == EXIT_INFEASIBLE

    def test_out_of_range(self, rate_config):
        assert main(["rate", rate_config(kind="solvable", a=0.5, eps=1.0)]) == EXIT_NUMERIC

    def test_unknown_key(self, rate_config):
        assert main(["rate", rate_config(kind="solvable", a=2.0, eps=1.0, colour="red")]) == EXIT_SCHEMA

    def test_from_config(self):
        cfg = load_experiment({"command": "rate", "kind": "solvable", "a": 1.0, "eps": 0.1})
        assert rate_from_config(cfg).multipliers[0] == pytest.approx(3.643, abs=1e-3)


class TestSweepCommand:
    @pytest.mark.parametrize("name, grade", [("kolmogorov_b2", "3"), ("kolmogorov_b1", "1")])
    def test_shipped(self, tmp_path, name, grade):
        prefix = str(tmp_path / name)
        assert main(["sweep", name, "--out", prefix]) == EXIT_OK
        fit = read_json(prefix + ".json")
        assert fit["grade"] == grade
        df = read_csv(prefix + ".csv")
        assert list(df.columns) == ["eps", "log_p", "stderr", "method"]
        assert len(df) == 4

    def test_sandwich_ratio(self, tmp_path):
        prefix = str(tmp_path / "solvable")
        assert main(["sweep", "solvable_b2", "--out", prefix]) == EXIT_OK
        fit = read_json(prefix + ".json")
        assert fit["grade"] is None
        assert abs(fit["ratio"][-1] + 2) < 0.3
        assert "ratio" in read_csv(prefix + ".csv").columns

    def test_idempotent(self, tmp_path):
        outputs = []
        for run in ("a", "b"):
            prefix = str(tmp_path / run)
            assert main(["sweep", "kolmogorov_b2", "--out", prefix, "--no-timestamp"]) == EXIT_OK
            outputs.append([Path(prefix + ext).read_bytes() for ext in (".json", ".csv")])
        assert outputs[0] == outputs[1]

    def test_timestamp_is_the_only_difference(self, tmp_path):
        a, b = str(tmp_path / "a"), str(tmp_path / "b")
        main(["sweep", "kolmogorov_b2", "--out", a])
        main(["sweep", "kolmogorov_b2", "--out", b, "--no-timestamp"])
        fit_a, fit_b = read_json(a + ".json"), read_json(b + ".json")
        fit_a.pop(TIMESTAMP_KEY)
        assert fit_a == fit_b

    def test_wrong_command(self, tmp_path, rate_config):
        assert main(["sweep", rate_config(kind="solvable", a=2.0, eps=1.0), "--out", str(tmp_path / "x")]) == EXIT_SCHEMA


class TestVerifyCommand:
    def test_algebra_suite(self, capsys):
        assert main(["verify", "--suite", "algebra"]) == EXIT_OK
        assert "checks passed" in capsys.readouterr().out

    def test_report_csv(self, tmp_path):
        out = str(tmp_path / "verify.csv")
        assert main(["verify", "--suite", "algebra", "--out", out]) == EXIT_OK
        df = read_csv(out)
        assert set(df.columns) >= {"suite", "check", "passed", "seconds"}
        assert df.passed.all()

    def test_bad_suite(self):
        with pytest.raises(SystemExit):
            main(["verify", "--suite", "everything"])

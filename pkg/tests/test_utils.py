from gradedev import *
import pytest
import numpy as np
import pandas as pd
from unittest.mock import patch
logger.setLevel(logging.CRITICAL+1)


def square(x):
    return x * x


def multiply(x, y):
    return x * y


class TestPmap:
    def test_basic(self):
        assert list(pmap(square, objects=[1, 2, 3, 4], num_proc=2)) == [1, 4, 9, 16]

    def test_single_process(self):
        assert pmap_l(square, objects=range(5), num_proc=1) == [0, 1, 4, 9, 16]

    def test_options(self):
        res = pmap_l(multiply, objects=[2, 3, 4], options=[{"y": 3}, {"y": 4}, {"y": 5}], num_proc=2)
        assert res == [6, 12, 20]

    def test_common_kwargs(self):
        assert pmap_l(multiply, objects=[1, 2], y=10) == [10, 20]

    def test_empty_input(self):
        with pytest.raises(ValueError):
            list(pmap(square))

    def test_mismatched_lengths(self):
        with pytest.raises(ValueError):
            list(pmap(square, objects=[1, 2, 3], options=[{}, {}]))

    def test_errors_propagate(self):
        with pytest.raises(SchemaError):
            pmap_l(check_option, objects=[("estimator", "guess", ESTIMATORS)])


class TestProgressBar:
    def test_without_progress(self):
        assert list(progress_bar(range(5), progress=False)) == list(range(5))

    def test_tqdm_not_available(self):
        with patch.dict("sys.modules", {"tqdm": None}):
            assert list(progress_bar(range(5), progress=True)) == list(range(5))

    def test_total_only(self):
        pbar = progress_bar(total=3, progress=False)
        pbar.update()
        pbar.update(2)
        assert pbar.n == 3
        pbar.close()


class TestJson:
    def test_jsonable(self):
        d = to_jsonable({"a": Fraction(3, 2), "b": math.inf, "c": -math.inf, "d": np.arange(2), 1: np.float64(0.5)})
        assert d == {"a": "3/2", "b": "inf", "c": "-inf", "d": [0, 1], "1": 0.5}

    def test_round_trip(self, tmp_path):
        path = str(tmp_path / "sub" / "out.json")
        write_json({"grades": [Fraction(1), Fraction(3)], "x": 1.5}, path)
        assert read_json(path) == {"grades": ["1", "3"], "x": 1.5}

    def test_sorted_keys(self, capsys):
        write_json({"b": 1, "a": 2})
        out = capsys.readouterr().out
        assert out.index('"a"') < out.index('"b"')

    def test_timestamp(self, tmp_path):
        path = str(tmp_path / "out.json")
        write_json({"a": 1}, path, timestamp=True)
        d = read_json(path)
        assert set(d) == {"a", TIMESTAMP_KEY}

    def test_unparseable(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("[1, 2")
        with pytest.raises(SchemaError):
            read_json(str(path))

    @pytest.mark.parametrize("serializer", SERIALIZERS)
    def test_serializers_agree(self, serializer):
        obj = {"z": [1, 2], "a": {"q": "3/2"}}
        assert json.loads(serialize_json_fast(obj, serializer)) == json.loads(serialize_json(obj))


class TestCsv:
    def test_round_trip(self, tmp_path):
        df = pd.DataFrame({"eps": [0.5, 0.1], "log_p": [-1 / 3, -math.pi]})
        path = write_csv(df, str(tmp_path / "t.csv"))
        back = read_csv(path)
        assert back.log_p.tolist() == pytest.approx(df.log_p.tolist(), rel=1e-15)

    def test_stdout(self, capsys):
        write_csv(pd.DataFrame({"a": [1]}))
        assert capsys.readouterr().out == "a\n1\n"


class TestMisc:
    @pytest.mark.parametrize("x, s", [(Fraction(3), "3"), (Fraction(5, 2), "5/2"), (math.inf, "inf"), (2, "2")])
    def test_fraction_str(self, x, s):
        assert fraction_str(x) == s
        assert parse_fraction(s) == x

    def test_check_option(self):
        assert check_option("estimator", "mc", ESTIMATORS) == "mc"
        with pytest.raises(SchemaError, match="Options"):
            check_option("estimator", "guess", ESTIMATORS)

    def test_exit_codes(self):
        assert SchemaError("x").exit_code == EXIT_SCHEMA
        assert OutOfRangeError("x").exit_code == EXIT_NUMERIC
        assert InfeasibleConstraintsError("x").exit_code == EXIT_INFEASIBLE
        assert isinstance(SchemaError("x"), ValueError)


class TestConfig:
    def test_defaults(self):
        c = Config()
        assert c.estimator == DEFAULT_ESTIMATOR
        assert c.num_proc >= 1
        assert set(c.to_dict()) == {"num_proc", "progress", "word_cap", "estimator", "serializer", "output_dir"}

    def test_setters(self):
        c = Config()
        c.set_estimator("is")
        c.enable_progress()
        c.set_word_cap(10)
        assert (c.estimator, c.progress, c.word_cap) == ("is", True, 10)
        with pytest.raises(SchemaError):
            c.set_estimator("guess")
        with pytest.raises(SchemaError):
            c.set_word_cap(0)

    def test_output_dir(self, tmp_path):
        c = Config()
        target = str(tmp_path / "runs" / "sweeps")
        c.set_output_dir(target)
        assert c.output_dir == target
        assert os.path.isdir(target)

    def test_serializer_fallback(self):
        assert get_serializer_type("json") == "json"
        with pytest.raises(SchemaError):
            get_serializer_type("pickle")


class TestLogs:
    def test_decorator_keeps_result(self):
        @log.debug
        def double(x):
            return 2 * x

        assert double(3) == 6

    def test_temporary_level(self):
        before = logger.level
        with temporary_log_level(logging.DEBUG):
            assert logger.level == logging.DEBUG
        assert logger.level == before

    def test_decorator_reraises(self):
        @log.info
        def boom():
            raise OutOfRangeError("nope")

        with pytest.raises(OutOfRangeError):
            boom()

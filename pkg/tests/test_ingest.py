"""Tests for the benchmark CSV dialect."""

import pytest

from scalecap.ingest import (
    format_benchmark_csv,
    parse_benchmark_csv,
    read_benchmark_csv,
)
from scalecap.fitting import BenchmarkSeries


class TestParse:
    def test_happy_path(self):
        s = parse_benchmark_csv("p,throughput\n1,100.0\n2,180\n3,244.0\n")
        assert s.label == "series"
        assert s.points == ((1, 100.0), (2, 180.0), (3, 244.0))

    def test_comments_blanks_and_spacing(self):
        text = (
            "# measured on cluster A\n"
            "\n"
            " p , throughput \n"
            "  2 , 180.5 \n"
            "# tail note\n"
            "1,100\n"
            "\n"
        )
        s = parse_benchmark_csv(text, label="runA")
        assert s.label == "runA"
        assert s.points == ((1, 100.0), (2, 180.5))

    def test_missing_header(self):
        with pytest.raises(ValueError, match='missing header "p,throughput"'):
            parse_benchmark_csv("# only comments\n")
        with pytest.raises(ValueError, match='missing header'):
            parse_benchmark_csv("")

    def test_wrong_header(self):
        with pytest.raises(ValueError, match='line 1: expected header'):
            parse_benchmark_csv("procs,tps\n1,100\n")
        with pytest.raises(ValueError, match='line 2: expected header'):
            parse_benchmark_csv("# comment\np,tput\n1,100\n")

    def test_field_count(self):
        with pytest.raises(ValueError, match="line 2: expected 2 fields, got 3"):
            parse_benchmark_csv("p,throughput\n1,100,extra\n")
        with pytest.raises(ValueError, match="line 2: expected 2 fields, got 1"):
            parse_benchmark_csv("p,throughput\n1\n")

    def test_unparseable_row(self):
        with pytest.raises(ValueError, match="line 3: could not parse"):
            parse_benchmark_csv("p,throughput\n1,100\ntwo,180\n")
        with pytest.raises(ValueError, match="could not parse"):
            parse_benchmark_csv("p,throughput\n1.5,100\n")

    def test_domain_checks(self):
        with pytest.raises(ValueError, match="processor count must be >= 1"):
            parse_benchmark_csv("p,throughput\n0,100\n")
        with pytest.raises(ValueError, match="finite positive"):
            parse_benchmark_csv("p,throughput\n1,0\n")
        with pytest.raises(ValueError, match="finite positive"):
            parse_benchmark_csv("p,throughput\n1,-5\n")
        with pytest.raises(ValueError, match="finite positive"):
            parse_benchmark_csv("p,throughput\n1,inf\n")
        with pytest.raises(ValueError, match="finite positive"):
            parse_benchmark_csv("p,throughput\n1,nan\n")

    def test_duplicate_rows(self):
        with pytest.raises(
            ValueError,
            match=r"line 4: duplicate measurement at p = 2 \(first seen on line 3\)",
        ):
            parse_benchmark_csv("p,throughput\n1,100\n2,180\n2,181\n")

    def test_errors_aggregate(self):
        text = "p,throughput\n1,100\nbad row here\n0,50\n2,-1\n"
        with pytest.raises(ValueError) as exc:
            parse_benchmark_csv(text)
        msg = str(exc.value)
        assert msg.startswith("malformed benchmark CSV: ")
        assert "line 3" in msg and "line 4" in msg and "line 5" in msg
        assert msg.count(";") == 2

    def test_empty_body(self):
        with pytest.raises(ValueError, match="no data rows"):
            parse_benchmark_csv("p,throughput\n# nothing else\n")


class TestFiles:
    def test_label_from_stem(self, tmp_path):
        f = tmp_path / "cluster_a.csv"
        f.write_text("p,throughput\n1,100\n8,420\n", encoding="utf-8")
        s = read_benchmark_csv(f)
        assert s.label == "cluster_a"
        assert s.points == ((1, 100.0), (8, 420.0))

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            read_benchmark_csv(tmp_path / "absent.csv")


class TestFormat:
    def test_round_trip(self):
        s = BenchmarkSeries("x", ((1, 100.0), (2, 180.0), (16, 1234.5678)))
        text = format_benchmark_csv(s)
        assert text.splitlines()[0] == "p,throughput"
        again = parse_benchmark_csv(text, label="x")
        assert again.points == s.points

    def test_full_precision(self):
        s = BenchmarkSeries("x", ((1, 0.1), (2, 1.0 / 3.0)))
        again = parse_benchmark_csv(format_benchmark_csv(s))
        assert again.points[0][1] == 0.1
        assert again.points[1][1] == 1.0 / 3.0

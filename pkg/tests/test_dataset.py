import csv
import io
from importlib import resources

import pytest
from conftest import DATA

from wvgpower.dataset import Dataset, DatasetError, bundled, load, load_csv, read_csv, read_json, weight_shares
from wvgpower.indices import render_percent


def test_bundled_totals():
    assert bundled(2015).total == 2520571
    d16 = bundled(2016)
    assert d16.total == 3572928
    assert d16.records[179].weight == 830988 and d16.records[179].name == "United States"
    assert bundled(2015).n == bundled(2016).n == 188
    with pytest.raises(DatasetError):
        bundled(2014)


def test_weight_shares_reproduce_printed_percentages():
    with open(DATA / "weight_shares.csv", encoding="utf-8") as f:
        printed = list(csv.DictReader(f))
    for year in (2015, 2016):
        shares = weight_shares(bundled(year))
        assert [render_percent(s, 3) for s in shares] == [r[f"pct_{year}"] for r in printed]
    assert render_percent(weight_shares(bundled(2016))[179], 3) == "23.258"
    assert render_percent(weight_shares(bundled(2015))[174], 3) == "0.030"


def test_single_member_has_everything():
    ds = read_csv(io.StringIO("index,name,weight\n1,Solo,7\n"))
    assert weight_shares(ds) == [1]


@pytest.mark.parametrize("year", [2015, 2016])
def test_csv_round_trip(year):
    text = resources.files("wvgpower.data").joinpath(f"imf{year}.csv").read_text(encoding="utf-8")
    assert bundled(year).to_csv().split() == text.split()


def test_json_round_trip(tmp_path):
    ds = bundled(2016)
    path = tmp_path / "imf.json"
    path.write_text(ds.to_json(), encoding="utf-8")
    back = load(path)
    assert back == ds
    assert read_json(io.StringIO(back.to_json())) == ds


def test_load_by_bundled_name_and_path(tmp_path):
    assert load("imf2015") == bundled(2015)
    p = tmp_path / "tiny.csv"
    p.write_text("index,name,weight\n1,A,2\n2,B,1\n3,C,1\n", encoding="utf-8")
    ds = load_csv(p)
    assert ds.weights == (2, 1, 1) and ds.year is None
    assert ds.game("3").quota == 3 and ds.game("75%").quota == 3


@pytest.mark.parametrize(
    "text, line, field",
    [
        ("", 1, None),
        ("index,name\n1,A\n", 1, None),
        ("index,name,weight\n1,A,3\n1,B,4\n", 3, "index"),
        ("index,name,weight\n1,A,3\n2,B,0\n", 3, "weight"),
        ("index,name,weight\n1,A,3\n2,B,-2\n", 3, "weight"),
        ("index,name,weight\n1,A,3\n2,B,2.5\n", 3, "weight"),
        ("index,name,weight\n1,A,3\nx,B,2\n", 3, "index"),
        ("index,name,weight\n1,A,3\n2,B\n", 3, None),
    ],
)
def test_csv_errors_name_line_and_field(text, line, field):
    with pytest.raises(DatasetError) as err:
        read_csv(io.StringIO(text))
    assert err.value.line == line
    assert err.value.field == field


def test_non_contiguous_and_empty_body():
    with pytest.raises(DatasetError):
        read_csv(io.StringIO("index,name,weight\n1,A,3\n3,B,2\n"))
    with pytest.raises(DatasetError):
        read_csv(io.StringIO("index,name,weight\n"))


def test_json_errors():
    with pytest.raises(DatasetError):
        read_json(io.StringIO("{"))
    with pytest.raises(DatasetError):
        read_json(io.StringIO('{"year": 2016}'))
    with pytest.raises(DatasetError):
        read_json(io.StringIO('{"members": [{"index": 1, "weight": 3}]}'))
    with pytest.raises(DatasetError):
        read_json(io.StringIO('{"members": [{"index": 1, "name": "A", "weight": true}]}'))
    ds = read_json(io.StringIO('{"year": 2020, "members": [{"index": 1, "name": "A", "weight": 3}]}'))
    assert isinstance(ds, Dataset) and ds.year == 2020

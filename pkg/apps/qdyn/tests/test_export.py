"""
Tests for CSV and JSON export.
"""
import json

import numpy as np

from apps.qdyn.export import round_significant, write_csv, write_json


class TestWriteCsv:
    """Tests for write_csv()."""

    def test_numbers(self, tmp_path):
        """Numeric rows use twelve significant digits."""
        path = write_csv(tmp_path / 'out.csv', ('t', 'x'), [(0.0, 1.0 / 3.0), (1.0, 2.0)])
        assert path.read_text().splitlines() == ['t,x', '0,0.333333333333', '1,2']

    def test_text_column(self, tmp_path):
        """A string column is written as text next to formatted numbers."""
        rows = [(0.1, 0.0, 'modified'), (0.2, 0.25, 'analytic-dephasing')]
        path = write_csv(tmp_path / 'scan.csv', ('a', 'measure', 'method'), rows)
        assert path.read_text().splitlines() == ['a,measure,method', '0.1,0,modified', '0.2,0.25,analytic-dephasing']

    def test_empty_rows(self, tmp_path):
        """No rows leaves just the header."""
        path = write_csv(tmp_path / 'empty.csv', ('traj', 'jump_time'), np.empty((0, 2)))
        assert path.read_text().splitlines() == ['traj,jump_time']


class TestWriteJson:
    """Tests for write_json()."""

    def test_rounding(self, tmp_path):
        """Floats are rounded, NumPy scalars unwrapped and NaN written as null."""
        payload = {'b': np.float64(1.0 / 3.0), 'a': [np.int64(2), float('nan')], 'c': np.bool_(True)}
        data = json.loads(write_json(tmp_path / 'out.json', payload).read_text())
        assert data == {'a': [2, None], 'b': 0.333333333333, 'c': True}
        assert round_significant((1.23456789012345,)) == [1.23456789012]

"""
Field and Report I/O for vmlk
CSV fields, diagnostics tables, JSON reports and .npy distribution dumps
"""

import json
import os

import numpy as np

from kinetics.errors import GridError
from kinetics.relax import DiagnosticsRecord

CSV_FORMAT = '%.17g'
SCALAR_HEADER = "x1,x2,x3,value"
VECTOR_HEADER = "x1,x2,x3,v1,v2,v3"


def _node_columns(tgrid):
    """Torus node coordinates in row-major order, shape (M^3, 3)"""
    return np.stack([X.reshape(-1) for X in tgrid.mesh], axis=1)


def field_table(field, tgrid):
    """Rows of x1,x2,x3 followed by the scalar value or the three components"""
    field = np.asarray(field, dtype=float)
    coords = _node_columns(tgrid)
    if field.shape == tgrid.shape:
        return np.column_stack([coords, field.reshape(-1)]), SCALAR_HEADER
    if field.shape == (3,) + tgrid.shape:
        return np.column_stack([coords] + [field[k].reshape(-1) for k in range(3)]), VECTOR_HEADER
    raise GridError(f"field of shape {field.shape} is neither scalar nor vector on a {tgrid.shape} torus")


def write_field_csv(path, field, tgrid):
    table, header = field_table(field, tgrid)
    np.savetxt(path, table, fmt=CSV_FORMAT, delimiter=',', header=header, comments='')
    return path


def read_field_csv(path, tgrid):
    """Inverse of write_field_csv; returns (M, M, M) or (3, M, M, M)"""
    try:
        with open(path, 'r') as f:
            header = f.readline().strip()
        table = np.loadtxt(path, delimiter=',', skiprows=1, ndmin=2)
    except (OSError, ValueError) as e:
        raise GridError(f"cannot read field table {path}: {e}") from e
    if header not in (SCALAR_HEADER, VECTOR_HEADER):
        raise GridError(f"{path}: unrecognized header {header!r}")
    columns = 4 if header == SCALAR_HEADER else 6
    if table.shape[1] != columns:
        raise GridError(f"{path} has {table.shape[1]} columns, expected {columns}")
    if table.shape[0] != tgrid.node_count:
        raise GridError(f"{path} has {table.shape[0]} rows, expected {tgrid.node_count}")
    if header == SCALAR_HEADER:
        return table[:, 3].reshape(tgrid.shape)
    return np.stack([table[:, 3 + k].reshape(tgrid.shape) for k in range(3)])


def read_distribution(path, vgrid, tgrid):
    try:
        f = np.load(path, allow_pickle=False)
    except (OSError, ValueError, EOFError) as e:
        raise GridError(f"cannot read distribution {path}: {e}") from e
    if not isinstance(f, np.ndarray):
        raise GridError(f"{path} is an archive, expected a single .npy array")
    if f.shape != tgrid.shape + vgrid.shape:
        raise GridError(f"{path} holds shape {f.shape}, expected {tgrid.shape + vgrid.shape}")
    return f


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


class OutputWriter:
    """Writes every artifact of a run into one directory and remembers what it wrote"""

    def __init__(self, output_dir):
        self.output_dir = output_dir
        self.written = []
        os.makedirs(self.output_dir, exist_ok=True)

    def path(self, name):
        return os.path.join(self.output_dir, name)

    def _record(self, name):
        if name not in self.written:
            self.written.append(name)
        return self.path(name)

    def write_json(self, name, document):
        target = self._record(name)
        with open(target, 'w') as f:
            json.dump(_jsonable(document), f, indent=2, sort_keys=True)
            f.write('\n')
        return target

    def write_field(self, name, field, tgrid):
        return write_field_csv(self._record(name), field, tgrid)

    def write_diagnostics(self, name, records):
        table = np.array([r.as_row() for r in records], dtype=float)
        target = self._record(name)
        np.savetxt(target, table, fmt=CSV_FORMAT, delimiter=',', header=DiagnosticsRecord.CSV_HEADER, comments='')
        return target

    def write_distribution(self, name, f):
        target = self._record(name)
        np.save(target, np.asarray(f, dtype=float))
        return target

    def summary(self, subcommand, exit_code):
        """run_summary.json: no timestamps, so reruns stay byte-identical"""
        return self.write_json('run_summary.json', {
            'subcommand': subcommand,
            'exit_code': exit_code,
            'files': sorted(set(self.written) | {'run_summary.json'}),
        })

# -*- coding: utf-8 -*-
#    Copyright (C) 2024  antiptsv developers
#
#    Released under the MIT license, a copy of which is located at the root of
#    this project.
"""Module containing functions to write and read tabular simulation results.

Part of the antiptsv package for simulating dissipatively coupled spin waves.
Every table produced by the package is a pandas dataframe. This module writes
those dataframes to comma separated values (CSV) files with a fixed
17-significant-digit number format, so that reruns give byte-identical files,
and to JSON files containing an array of row objects with the same numbers.
"""


import json
import logging
import math
import os

import numpy as np
import pandas as pd


logger = logging.getLogger(__name__)

FLOAT_FORMAT = '%.17g'
FORMATS = ('csv', 'json')


def _output_path(*, write_dir, file_name, file_prefix, extension):
    """Create the output directory if needed and return the file path."""
    if not os.path.exists(write_dir):
        os.makedirs(write_dir)
    if file_prefix is not None:
        file_name = file_prefix + file_name
    return os.path.join(write_dir, file_name + '.' + extension)


def write_csv_data(*, data, write_dir, file_name, file_prefix=None,
                   header=True):
    """Write dataframe to a CSV file.

    Args:
        data (pandas.DataFrame): data to be written to file.
        write_dir (str): directory path to which the output CSV file is
            written. Created if it does not exist.
        file_name (str): file name without the extension.
        file_prefix (str): optional string to prefix the output CSV filename
            (useful for specifying the sweep point used to create the dataset).
        header (bool): option to include header in file. Defaults to True.

    Returns:
        fpath (str): path of the written file.
    """
    fpath = _output_path(write_dir=write_dir, file_name=file_name,
                         file_prefix=file_prefix, extension='csv')
    data.to_csv(fpath, sep=',', na_rep='NA', header=header, index=False,
                float_format=FLOAT_FORMAT, lineterminator='\n')
    logger.debug('wrote %d rows to %s', len(data), fpath)
    return fpath


def read_csv_data(*, fname):
    """Read dataframe from a CSV file written by write_csv_data.

    Args:
        fname (str): path to a CSV datafile.

    Returns:
        data (pandas.DataFrame):
            dataframe with one column per header entry. Numbers are parsed
            with round-trip precision so that written values are recovered
            exactly.
    """
    return pd.read_csv(fname, sep=',', na_values='NA',
                       float_precision='round_trip')


def _json_value(value):
    """Convert a dataframe cell to a JSON-serialisable python value."""
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return None if math.isnan(value) else value
    return value


def write_json_data(*, data, write_dir, file_name, file_prefix=None):
    """Write dataframe to a JSON file as an array of row objects.

    Floats are written with the shortest representation that round-trips and
    NaN is written as null.

    Args:
        data (pandas.DataFrame): data to be written to file.
        write_dir (str): directory path to which the output file is written.
        file_name (str): file name without the extension.
        file_prefix (str): optional string to prefix the output filename.

    Returns:
        fpath (str): path of the written file.
    """
    fpath = _output_path(write_dir=write_dir, file_name=file_name,
                         file_prefix=file_prefix, extension='json')
    rows = [{str(col): _json_value(val) for col, val in zip(data.columns, row)}
            for row in data.itertuples(index=False, name=None)]
    with open(fpath, 'w', newline='\n') as fout:
        json.dump(rows, fout, indent=1, allow_nan=False)
        fout.write('\n')
    logger.debug('wrote %d rows to %s', len(data), fpath)
    return fpath


def read_json_data(*, fname):
    """Read dataframe from a JSON file written by write_json_data.

    Args:
        fname (str): path to a JSON datafile.

    Returns:
        data (pandas.DataFrame):
            dataframe with one column per key of the row objects; null values
            become NaN.
    """
    with open(fname) as fin:
        rows = json.load(fin)
    return pd.DataFrame.from_records(rows)


def write_table(*, data, write_dir, file_name, formats=('csv',),
                file_prefix=None):
    """Write dataframe in each of the requested output formats.

    Args:
        data (pandas.DataFrame): data to be written to file.
        write_dir (str): output directory.
        file_name (str): file name without the extension.
        formats (list): any of 'csv' and 'json'. Defaults to CSV only.
        file_prefix (str): optional string to prefix the output filenames.

    Returns:
        paths (list): paths of the written files, in the order of formats.
    """
    writers = {'csv': write_csv_data, 'json': write_json_data}
    paths = []
    for fmt in formats:
        if fmt not in writers:
            raise ValueError('unknown output format %r (expected one of %s)' %
                             (fmt, ', '.join(FORMATS)))
        try:
            paths.append(writers[fmt](data=data, write_dir=write_dir,
                                      file_name=file_name,
                                      file_prefix=file_prefix))
        except OSError as err:
            raise OSError('cannot write output to %s: %s' % (
                write_dir, err.strerror or err)) from err
    return paths

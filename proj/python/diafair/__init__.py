"""Diarization outcome rates and fairness statistics by demographic group."""

import json

try:
    from . import _diafair as _native
except ImportError:  # in-tree build: the extension sits on PYTHONPATH next to this package
    import _diafair as _native

DiafairError = _native.DiafairError
__version__ = _native.__version__

parse_manifest = _native.parse_manifest
parse_rttm = _native.parse_rttm
serialize_rttm = _native.serialize_rttm
count_speakers = _native.count_speakers
classify_outcome = _native.classify_outcome
margin = _native.margin
confidence_interval = _native.confidence_interval
invert_margin = _native.invert_margin
dfr = _native.dfr
simulate = _native.simulate
coverage_experiment = _native.coverage_experiment
render_table = _native.render_table
validate_tables = _native.validate_tables


def evaluate(manifest, hypotheses, **kwargs):
    """Score hypotheses against a manifest and return the report as a dict."""
    return json.loads(evaluate_json(manifest, hypotheses, **kwargs))


def evaluate_json(manifest, hypotheses, **kwargs):
    """Score hypotheses against a manifest and return the canonical JSON text."""
    return _native.evaluate(str(manifest), str(hypotheses), **kwargs)

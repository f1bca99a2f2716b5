"""Synthetic lifelog benchmark: generation, QA, tables, retrieval and scoring."""

import json

from ._core import (
    ConfigError,
    DataError,
    IoError,
    LifelogError,
    ParseError,
    QueryError,
    RetrievalFailure,
    __version__,
    build_tables,
    exact_match,
    gen_qa,
    generate,
    normalize,
    predict,
    retrieve,
    split,
    token_f1,
)
from ._core import evaluate as _evaluate
from ._core import stats as _stats


def evaluate(qa, predictions, mode="multihop"):
    """Return the score report as a dict (score, text, report)."""
    r = _evaluate(str(qa), str(predictions), mode)
    return {"score": r["score"], "text": r["text"], "report": json.loads(r["json"])}


def stats(corpus):
    return json.loads(_stats(str(corpus)))


__all__ = [
    "ConfigError",
    "DataError",
    "IoError",
    "LifelogError",
    "ParseError",
    "QueryError",
    "RetrievalFailure",
    "__version__",
    "build_tables",
    "evaluate",
    "exact_match",
    "gen_qa",
    "generate",
    "normalize",
    "predict",
    "retrieve",
    "split",
    "stats",
    "token_f1",
]

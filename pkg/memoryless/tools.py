import logging
import sys
from collections import OrderedDict
from itertools import groupby
from logging import getLogger, StreamHandler
from os import makedirs, path
from pathlib import Path
from typing import List, Iterable, TypeVar, Callable, Dict, Tuple, Any

E = TypeVar('Element')


def read_text(path: Path, encoding='utf8') -> str:
    with path.open(encoding=encoding) as f:
        return f.read()


def write_text(path: Path, text: str, encoding='utf8'):
    with path.open(mode='w', encoding=encoding, newline='') as f:
        f.write(text)


def mkdir(directory: Path) -> None:
    makedirs(str(directory), exist_ok=True)


def home_directory() -> Path:
    return Path(path.expanduser('~'))


def distinct(sequence: Iterable[E]) -> List[E]:
    return list(OrderedDict.fromkeys(sequence))


K = TypeVar('Key')
V = TypeVar('Value')


def group(iterable: Iterable[E], key: Callable[[E], K], value: Callable[[E], V] = lambda x: x) -> Dict[K, Tuple[V]]:
    """
    Groups while keeping the first-seen order of keys (unlike itertools.groupby on unsorted input).
    """
    items = list(iterable)
    keys = distinct(key(item) for item in items)
    order = dict((k, index) for index, k in enumerate(keys))
    return OrderedDict((k, tuple(map(value, values)))
                       for k, values in groupby(sorted(items, key=lambda item: order[key(item)]), key))


def format_number(number: float) -> str:
    """
    Fixed 12 significant digits, '.' decimal separator.
    """
    formatted = "{:.12g}".format(number)
    return "0" if formatted == "-0" else formatted


logger = getLogger("results")
logger.setLevel(logging.INFO)

# stderr: standard output carries CSV/JSON results
handler = StreamHandler(sys.stderr)
handler.setLevel(logging.INFO)
logger.addHandler(handler)


def log(obj: Any):
    logger.info(str(obj))

# modules/knot_table.py
import os
import threading

from modules.errors import InvalidArgumentError, UnknownKnotError
from modules.groups import PDCode, pd_from_braid, pd_from_text
from modules.logging_utils import app_logger as log
from modules.reports import KnotTableEntry
from modules.settings import settings


class KnotTable:
    """Knots loaded from the shipped table file.

    Entries are ``key: value`` lines starting with ``name:``; ``#`` lines are comments.
    """

    def __init__(self, path=None):
        """Load the table.

        Args:
            path (str): Table file, defaults to settings.KNOT_TABLE
        """
        self.path = path or settings.KNOT_TABLE
        self.entries = {}  # name -> KnotTableEntry
        self._pd_cache = {}
        self.load()

    def load(self):
        if not os.path.exists(self.path):
            raise InvalidArgumentError(f"knot table not found: {self.path}")
        current = None
        with open(self.path, 'r', encoding='utf-8') as f:
            for number, raw in enumerate(f, start=1):
                line = raw.strip()
                if not line or line.startswith('#'):
                    continue
                key, sep, value = line.partition(':')
                if not sep:
                    raise InvalidArgumentError(f"{self.path}:{number}: expected 'key: value'")
                key, value = key.strip().lower(), value.strip()
                if key == 'name':
                    current = {'name': value}
                    self.entries[value] = current
                elif current is None:
                    raise InvalidArgumentError(f"{self.path}:{number}: '{key}' before any 'name:'")
                elif key == 'braid':
                    current['braid'] = [int(s) for s in value.split()]
                elif key == 'pd':
                    current['pd'] = value
                elif key == 'seifert':
                    current['seifert'] = [[int(v) for v in row.split()] for row in value.split(';') if row.strip()]
                elif key == 'genus':
                    current['genus'] = int(value)
                elif key == 'fibered':
                    current['fibered'] = value.lower() in ('yes', 'true', '1')
                else:
                    raise InvalidArgumentError(f"{self.path}:{number}: unknown key '{key}'")
        self.entries = {name: KnotTableEntry(**fields) for name, fields in self.entries.items()}
        log.info(f"Loaded {len(self.entries)} knots from {self.path}")

    def names(self):
        return list(self.entries)

    def lookup(self, name):
        try:
            return self.entries[name]
        except KeyError:
            raise UnknownKnotError(f"unknown knot '{name}'; known: {', '.join(self.entries)}") from None

    def pd(self, name) -> PDCode:
        """PD code of a table knot: the listed one, else the closure of its braid word."""
        if name not in self._pd_cache:
            entry = self.lookup(name)
            self._pd_cache[name] = pd_from_text(entry.pd) if entry.pd else pd_from_braid(entry.braid)
        return self._pd_cache[name]


_table = None
_table_lock = threading.Lock()


def default_table() -> KnotTable:
    global _table
    with _table_lock:
        if _table is None:
            _table = KnotTable()
        return _table


def knot_lookup(name) -> KnotTableEntry:
    return default_table().lookup(name)


def knot_pd(name) -> PDCode:
    return default_table().pd(name)

# modules/settings.py
import os

import environ

env = environ.Env()

_REPO_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


class Settings:
    """Runtime knobs, read once from the environment (and .env when main.py loaded it)."""

    def __init__(self, env=env):
        self.THREADS = max(1, env.int("KNOTFORGE_THREADS", default=4))
        self.TRUNCATION = env.int("KNOTFORGE_TRUNCATION", default=20)
        self.MAX_COSETS = env.int("KNOTFORGE_MAX_COSETS", default=200000)
        self.MAX_MINORS = env.int("KNOTFORGE_MAX_MINORS", default=4000)
        self.EPI_BUDGET = env.int("KNOTFORGE_EPI_BUDGET", default=2000000)
        self.EXPAND_DIM = env.int("KNOTFORGE_EXPAND_DIM", default=12)
        self.KNOT_TABLE = env("KNOTFORGE_KNOT_TABLE", default=os.path.join(_REPO_ROOT, "knots", "table.txt"))

    def as_dict(self):
        return {name: value for name, value in vars(self).items() if name.isupper()}


settings = Settings()

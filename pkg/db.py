# -----------------------------
# File: db.py
# -----------------------------
from __future__ import annotations
import logging
import os

from sqlalchemy import create_engine, event
from sqlalchemy.orm import sessionmaker

from models import Base

LOGGER = logging.getLogger(__name__)


def _sqlite_path_from_db_url(db_url: str) -> str | None:
    """
    Extract a filesystem path from a URL like sqlite:///results/runs.db
    Returns None for in-memory and non-sqlite URLs.
    """
    lower = (db_url or "").lower()
    if lower.startswith("sqlite:///"):
        path = db_url.split("sqlite:///", 1)[1]
        return path or None
    return None


def _enable_sqlite_foreign_keys(engine):
    """SQLite only runs ON DELETE CASCADE with foreign_keys turned on per connection."""
    def _fk_on(dbapi_conn, conn_record):
        cur = dbapi_conn.cursor()
        cur.execute("PRAGMA foreign_keys=ON")
        cur.close()
    event.listen(engine, "connect", _fk_on, once=False)


def init_engine_and_session(db_url: str):
    if db_url.startswith("sqlite"):
        path = _sqlite_path_from_db_url(db_url)
        if path and path != ":memory:":
            os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    engine = create_engine(db_url, echo=False, future=True)
    if engine.dialect.name == "sqlite":
        _enable_sqlite_foreign_keys(engine)

    SessionLocal = sessionmaker(bind=engine, autoflush=False, autocommit=False, future=True)
    return engine, SessionLocal


def ensure_schema(engine):
    """Create any missing tables."""
    Base.metadata.create_all(engine)
    LOGGER.debug("result store schema ready on %s", engine.url)

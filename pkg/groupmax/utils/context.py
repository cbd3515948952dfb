import uuid
from contextvars import ContextVar
from typing import Optional

run_id_context: ContextVar[Optional[str]] = ContextVar("run_id", default=None)


def get_run_id() -> Optional[str]:
    """Get the current run ID from context."""
    return run_id_context.get()


def set_run_id(run_id: str) -> None:
    """Set the run ID in context."""
    run_id_context.set(run_id)


def new_run_id() -> str:
    """Create a fresh run ID and make it current."""
    run_id = uuid.uuid4().hex[:12]
    set_run_id(run_id)
    return run_id

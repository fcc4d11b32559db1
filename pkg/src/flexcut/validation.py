"""Input validation helpers shared by the estimators and the CLI."""
from __future__ import annotations

from pathlib import Path
from typing import Iterable

from .graph import ContractViolation, LabeledMultigraph, NodeShore, as_mask, edge_set_mask


def check_instance(X, *, check: bool = True):
    """Coerce ``X`` to an :class:`~flexcut.model.FgcInstance`.

    Accepts an instance, a path to an instance file, or instance text.
    """
    from .model import FgcInstance

    if isinstance(X, FgcInstance):
        return X
    if isinstance(X, Path) or (isinstance(X, str) and "\n" not in X.strip()):
        path = Path(X)
        if not path.is_file():
            raise ContractViolation(f"no instance file at {path}")
        return FgcInstance.load(path, check=check)
    if isinstance(X, str):
        return FgcInstance.from_text(X, check=check)
    raise ContractViolation(f"cannot interpret {type(X).__name__} as an FGC instance")


def check_edge_set(G: LabeledMultigraph, F: Iterable[int] | int | None) -> int:
    """Bitmask of ``F``; ``None`` means every edge."""
    return edge_set_mask(G, F)


def check_shore(G: LabeledMultigraph, S: NodeShore | Iterable[int] | int, *, proper: bool = True) -> NodeShore:
    mask = as_mask(S)
    if mask >> G.n:
        raise ContractViolation(f"shore has nodes outside [0, {G.n})")
    shore = NodeShore(mask, G.n)
    return shore.require_proper() if proper else shore


def parse_edge_list(text: str | None) -> list[int] | None:
    """``"0,3,5"`` -> ``[0, 3, 5]``; empty or ``None`` -> ``None``."""
    if text is None or not text.strip():
        return None
    return [int(tok) for tok in text.replace(" ", ",").split(",") if tok]

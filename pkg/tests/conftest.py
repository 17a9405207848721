"""Shared fixtures: the bundled configurations and the small vocabularies used throughout."""

from __future__ import annotations

from pathlib import Path

import pytest

from aectopo.cli import main

from aectopo.config import bundled_configs, parse_config
from aectopo.pipeline import Context
from aectopo.structures import Vocabulary

GRAPH = Vocabulary(relations=(("E", 2),))
UNARY_FUNCTION = Vocabulary(functions=(("s", 1),))
PREDICATE_AND_CONSTANT = Vocabulary(relations=(("P", 1),), constants=("c",))
PREDICATE = Vocabulary(relations=(("P", 1),))
SMALL_VOCABULARIES = {"E/2": GRAPH, "s/1": UNARY_FUNCTION, "P/1,c": PREDICATE_AND_CONSTANT}


@pytest.fixture(scope="session")
def configs():
    return {name: parse_config(path) for name, path in bundled_configs().items()}


@pytest.fixture(scope="session")
def graph_cfg(configs):
    return configs["graphs"]


@pytest.fixture(scope="session")
def graph_ctx(graph_cfg):
    return Context(graph_cfg)


@pytest.fixture(scope="session")
def graph_aec(graph_ctx):
    return graph_ctx.aec


@pytest.fixture(scope="session")
def graph_theory(graph_ctx):
    return graph_ctx.theory


def tree(root: Path) -> dict:
    """Every file under ``root`` by relative path, as bytes."""
    return {p.relative_to(root).as_posix(): p.read_bytes() for p in sorted(root.rglob("*")) if p.is_file()}


def run_all(config: str, out: Path) -> tuple[int, Path]:
    code = main(["all", "--config", config, "--out", str(out)])
    (target,) = list(out.iterdir())
    return code, target


@pytest.fixture(scope="session")
def graphs_all_twice(tmp_path_factory):
    """Two independent ``all`` runs on the graphs configuration."""
    path = str(bundled_configs()["graphs"])
    return [run_all(path, tmp_path_factory.mktemp(f"graphs{i}")) for i in range(2)]


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)

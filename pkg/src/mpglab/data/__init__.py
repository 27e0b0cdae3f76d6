"""Bundled documents: the case-study graph and its default scenario."""

from importlib import resources


def read_text(name: str) -> str:
    return resources.files(__package__).joinpath(name).read_text(encoding="utf-8")


def case_study_graph_text() -> str:
    return read_text("case_study_graph.json")


def case_study_scenario_text() -> str:
    return read_text("case_study_scenario.json")

"""Bundled benchmark networks (karate, dolphins)."""

from importlib.resources import files

from ..graph import Graph, parse_edge_list

DATASETS = ("karate", "dolphins")


def dataset_text(name: str) -> str:
    if name not in DATASETS:
        raise ValueError(f"unknown dataset {name!r}; available: {', '.join(DATASETS)}")
    return files(__package__).joinpath(f"{name}.txt").read_text(encoding="utf-8")


def load_dataset(name: str) -> Graph:
    return parse_edge_list(dataset_text(name))

"""Residue-residue contact energy models and table loading."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from importlib import resources

#: Residues treated as hydrophobic by the toy HP table.
HP_HYDROPHOBIC = set("AVILMFWPC")

#: All standard one-letter residue codes.
RESIDUES = set("ACDEFGHIKLMNPQRSTVWY")


@dataclass(frozen=True)
class InteractionModel:
    """Symmetric residue-pair contact energies (attractive = negative)."""

    kind: str  # "MJ" | "HP" | "custom"
    energies: dict[frozenset, float] = field(default_factory=dict)

    def has_residue(self, code: str) -> bool:
        return any(code in key for key in self.energies)

    def pair_energy(self, a: str, b: str) -> float:
        key = frozenset((a, b))
        if key not in self.energies:
            raise KeyError(f"no contact energy for residue pair ({a}, {b})")
        return self.energies[key]

    def max_abs_energy(self) -> float:
        return max((abs(v) for v in self.energies.values()), default=0.0)


def load_interaction_table(path) -> InteractionModel:
    """Read a CSV with header ``res_a,res_b,energy`` into a symmetric model.

    Duplicate rows for the same unordered pair must agree in value.
    """
    energies: dict[frozenset, float] = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is not None and set(reader.fieldnames) != {
            "res_a",
            "res_b",
            "energy",
        }:
            raise ValueError(
                f"expected header res_a,res_b,energy, got {reader.fieldnames}"
            )
        for row in reader:
            a, b = row["res_a"].strip(), row["res_b"].strip()
            try:
                value = float(row["energy"])
            except ValueError as exc:
                raise ValueError(f"bad energy value in row {row}") from exc
            key = frozenset((a, b))
            if key in energies and energies[key] != value:
                raise ValueError(
                    f"conflicting energies for pair ({a}, {b}): "
                    f"{energies[key]} vs {value}"
                )
            energies[key] = value
    return InteractionModel("custom", energies)


def toy_hp_model() -> InteractionModel:
    """HP-style table: hydrophobic-hydrophobic contacts -1, all else 0."""
    energies = {}
    for a in RESIDUES:
        for b in RESIDUES:
            e = -1.0 if (a in HP_HYDROPHOBIC and b in HP_HYDROPHOBIC) else 0.0
            energies[frozenset((a, b))] = e
    return InteractionModel("HP", energies)


def mj_model() -> InteractionModel:
    """Bundled Miyazawa-Jernigan-style contact energies (see data file)."""
    data = resources.files("foldvqe.data").joinpath("mj_contact_energies.csv")
    with resources.as_file(data) as path:
        model = load_interaction_table(path)
    return InteractionModel("MJ", model.energies)


def builtin_model(name: str) -> InteractionModel:
    if name == "toy_hp":
        return toy_hp_model()
    if name == "mj":
        return mj_model()
    raise ValueError(f"unknown builtin interaction model {name!r}")

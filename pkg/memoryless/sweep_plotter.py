from pathlib import Path

import matplotlib.pyplot as plt
from typing import List

from memoryless.sweep import SweepRecord, parameter_keys_of
from memoryless.tools import group, mkdir


class SweepPlotter:
    """
    λ_min versus μ (or versus a swept parameter when μ is fixed per curve), one curve per slice.
    """

    def __init__(self, records: List[SweepRecord]):
        if not records:
            raise ValueError("Nothing to plot.")

        self.records = records
        self.model = records[0].model
        self.parameter_keys = parameter_keys_of(records)
        self.varying_keys = [key for key in self.parameter_keys
                             if len(set(record.parameters[key] for record in records)) > 1]

    def _x_key(self) -> str:
        # a single varying parameter with few mu values (optical A1 sweeps) goes on the x axis
        mu_count = len(set(record.mu for record in self.records))
        if len(self.varying_keys) == 1 and mu_count < len(self.records) / mu_count:
            return self.varying_keys[0]

        return "mu"

    def _x(self, record: SweepRecord, x_key: str) -> float:
        return record.mu if x_key == "mu" else record.parameters[x_key]

    def _slice_label(self, record: SweepRecord, x_key: str) -> str:
        if x_key != "mu":
            return "μ={:g}".format(record.mu)

        return ", ".join("{}={}".format(key, record.parameters[key]) for key in self.varying_keys) or self.model

    def prepare_regime_plot(self) -> None:
        x_key = self._x_key()
        figure, axes = plt.subplots(1, 1)
        plotted = [record for record in self.records if record.lambda_min is not None]
        for label, records in group(plotted, key=lambda r: self._slice_label(r, x_key)).items():
            axes.plot([self._x(r, x_key) for r in records], [r.lambda_min for r in records], label=label)

        axes.axhline(0, color='gray', linewidth=0.5)
        plt.title("Smallest eigenvalue of B(t2, t1) for {} (t1 = {:g})".format(self.model, self.records[0].t1))
        plt.xlabel("μ = t2 / t1" if x_key == "mu" else x_key)
        plt.ylabel("λ_min (negative: not completely positive)")
        axes.legend()
        figure.set_size_inches(12.80, 7.20)

    def save_regime_plot(self, target_directory: Path) -> Path:
        mkdir(target_directory)
        self.prepare_regime_plot()
        path = Path(target_directory, "{}_regimes.png".format(self.model))
        plt.savefig(str(path))
        plt.close()
        return path


class ConcurrencePlotter:
    def __init__(self, trajectories_by_label: dict):
        self.trajectories_by_label = trajectories_by_label

    def save_concurrence_plot(self, target_directory: Path, name: str = "concurrence") -> Path:
        mkdir(target_directory)
        figure, axes = plt.subplots(1, 1)
        for label, points in self.trajectories_by_label.items():
            axes.plot([point.t for point in points], [point.concurrence for point in points], label=label)

        plt.title("Concurrence of the system-ancilla state")
        plt.xlabel("t")
        plt.ylabel("concurrence")
        axes.legend()
        figure.set_size_inches(12.80, 7.20)

        path = Path(target_directory, "{}.png".format(name))
        plt.savefig(str(path))
        plt.close()
        return path

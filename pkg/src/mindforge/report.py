"""Facet summary reports: delimited counts plus a rendered bar chart.

Useful for a quick look at a result set ("how do the hits spread over the
years?") without spinning up the service. One call writes ``<base>.tsv``
with label/count rows and ``<base>.png`` with the matching figure.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence, Union

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .cleaning import PublicationRecord
from .organizer import FacetSpec, group_results


def write_facet_report(records: Sequence[PublicationRecord], facet: FacetSpec,
                       out_base: Union[str, Path]) -> tuple[Path, Path]:
    """Group records by ``facet`` and write TSV + PNG next to each other."""
    groups = group_results(records, facet)
    out_base = Path(out_base)
    out_base.parent.mkdir(parents=True, exist_ok=True)

    tsv_path = out_base.with_suffix(".tsv")
    with open(tsv_path, "w", encoding="utf-8") as fh:
        fh.write("label\tcount\n")
        for group in groups:
            fh.write(f"{group.label}\t{len(group.records)}\n")

    labels = [g.label for g in groups]
    counts = [len(g.records) for g in groups]
    fig, ax = plt.subplots(figsize=(max(4.0, 0.6 * len(labels) + 2.0), 3.5))
    ax.bar(range(len(labels)), counts, color="#4878a8")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=45, ha="right", fontsize=8)
    ax.set_ylabel("records")
    facet_name = facet.field if facet.pattern is None else f"{facet.field} ~ {facet.pattern}"
    ax.set_title(f"results by {facet_name}")
    fig.tight_layout()
    png_path = out_base.with_suffix(".png")
    fig.savefig(png_path, dpi=120)
    plt.close(fig)

    return tsv_path, png_path

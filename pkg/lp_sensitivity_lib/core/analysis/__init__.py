from .corpus import (CORPORA, CorpusResult, Expectation, compare,
                     corpus_names, render_comparison, reproduce)
from .generators import (inventory_document, inventory_instance,
                         network_document, network_instance,
                         systemic_risk_instance)
from .instance_loader import (Instance, build_instance, bundled_instances,
                              load_instance)
from .pipeline import analyze, merge_options, solve_relaxation
from .report import AnalysisReport, render_report

__all__ = [
    "CORPORA", "CorpusResult", "Expectation", "compare", "corpus_names",
    "render_comparison", "reproduce", "inventory_document",
    "inventory_instance", "network_document", "network_instance",
    "systemic_risk_instance", "Instance", "build_instance",
    "bundled_instances", "load_instance", "analyze", "merge_options",
    "solve_relaxation", "AnalysisReport", "render_report",
]

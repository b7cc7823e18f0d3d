"""
Tests for model comparison and the results table.
"""
import pytest

from src.analysis.comparison import compare_models, render_results_table
from src.analysis.experiment import ExperimentContext, ExperimentError
from src.analysis.statistics import summarize_runs
from src.constants import ModelName
from src.corpus.splits import split_corpus
from src.models.configs import ExperimentSpec
from src.models.reports import Metrics


def create_report(model, accuracies, macro_f1s):
    """テスト用のレポートを作成"""
    metrics = [
        Metrics(accuracy=a, macro_f1=f, per_class_f1=[f, f], confusion=[[1, 0], [0, 1]])
        for a, f in zip(accuracies, macro_f1s)
    ]
    return summarize_runs(model, list(range(len(metrics))), metrics, ["a", "b"], {})


class TestRenderResultsTable:
    """Markdown results table."""

    def test_best_means_are_bold(self):
        table = render_results_table([
            create_report("tfidf", [0.8, 0.9], [0.7, 0.9]),
            create_report("textgcn", [0.95, 0.95], [0.75, 0.75]),
        ])
        lines = table.splitlines()
        assert lines[0] == "| Model | Accuracy (%) | F1 (%) |"
        assert lines[2] == "| TF-IDF | 85.00 ± 5.00 | **80.00 ± 10.00** |"
        assert lines[3] == "| Text GCN | **95.00 ± 0.00** | 75.00 ± 0.00 |"

    def test_unknown_model_uses_raw_name(self):
        table = render_results_table([create_report("custom", [0.5], [0.5])])
        assert "| custom |" in table

    def test_empty(self):
        assert render_results_table([]) == "_No results_\n"


class TestCompareModels:
    """Several models under one protocol."""

    @pytest.fixture
    def context(self, small_corpus):
        return ExperimentContext(corpus=small_corpus, split=split_corpus(small_corpus, seed=0))

    def test_one_report_per_model_in_order(self, context):
        reports = compare_models(
            context, [ModelName.COUNTS, ModelName.TFIDF], ExperimentSpec(label_proportion=0.5), seeds=[0, 1]
        )
        assert [report.model for report in reports] == ["counts", "tfidf"]
        assert all(report.seeds == [0, 1] for report in reports)

    def test_failure_keeps_completed_reports(self, context):
        with pytest.raises(ExperimentError) as info:
            compare_models(context, [ModelName.TFIDF, ModelName.AVG_EMBED], ExperimentSpec(), seeds=[0])
        assert [report.model for report in info.value.completed] == ["tfidf"]

    def test_no_models(self, context):
        with pytest.raises(ValueError, match="No models"):
            compare_models(context, [], ExperimentSpec())

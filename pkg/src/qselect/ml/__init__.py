"""Solver-selection classifiers and their evaluation."""
from .evaluate import (
    EvalReport,
    FoldMetrics,
    GridRow,
    LabeledData,
    cross_validate,
    evaluate_grid,
    grid_csv,
    majority_baseline,
    stratified_kfold,
)
from .models import CLASSIFIERS, N_CLASSES, TrainingError, train
from .pipeline import (
    DEFAULT_PREPROCESSING,
    ModelFormatError,
    PipelineSpec,
    TrainedModel,
    fit_pipeline,
    load_model,
    save_model,
)
from .preprocess import MinMaxScaler, PreprocessError, Projection, fit_lda, fit_pca

__all__ = [
    "CLASSIFIERS", "DEFAULT_PREPROCESSING", "EvalReport", "FoldMetrics", "GridRow", "LabeledData",
    "MinMaxScaler", "ModelFormatError", "N_CLASSES", "PipelineSpec", "PreprocessError", "Projection",
    "TrainedModel", "TrainingError", "cross_validate", "evaluate_grid", "fit_lda", "fit_pca",
    "fit_pipeline", "grid_csv", "load_model", "majority_baseline", "save_model", "stratified_kfold", "train",
]

from .agreement import (
    AgreementItem,
    AgreementTable,
    Cell,
    ConfusionMatrix,
    CriterionRow,
    HumanLabel,
    agreement_table,
    binarize,
    cohen_kappa,
    format_kappa,
    table_from_matrices,
)

__all__ = [
    "AgreementItem",
    "AgreementTable",
    "Cell",
    "ConfusionMatrix",
    "CriterionRow",
    "HumanLabel",
    "agreement_table",
    "binarize",
    "cohen_kappa",
    "format_kappa",
    "table_from_matrices",
]

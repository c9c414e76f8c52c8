from ._core import (  # noqa: F401
    DataError,
    PhrasePair,
    ProjectionMatrix,
    SyntheticConfig,
    TrainConfig,
    TrainingReport,
    UsageError,
    VectorSpace,
    WordModelKind,
    average_phrase_vector,
    cosine,
    emit_phrase_table_line,
    induce_translations,
    load_matrix,
    load_vectors,
    make_synthetic,
    parse_lexicon,
    parse_phrase_table_line,
    project,
    save_matrix,
    save_vectors,
    train_projection_closed_form,
    train_projection_sgd,
    train_word_vectors,
)

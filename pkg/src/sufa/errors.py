"""Exception and warning types shared across the pipeline."""


class SufaError(Exception):
    """Base class for all pipeline errors."""


# --- corpus / CoNLL-U ---

class CorpusError(SufaError):
    pass


class ConlluError(CorpusError):
    def __init__(self, message, sent_id=None, line_no=None):
        parts = []
        if sent_id is not None:
            parts.append(f"sentence {sent_id}")
        if line_no is not None:
            parts.append(f"line {line_no}")
        suffix = f" ({', '.join(parts)})" if parts else ""
        super().__init__(f"{message}{suffix}")
        self.sent_id = sent_id
        self.line_no = line_no


class MalformedLine(ConlluError):
    pass


class HeadOutOfRange(ConlluError):
    pass


class CyclicTree(ConlluError):
    pass


class MultipleRoots(ConlluError):
    pass


class MissingMetadata(CorpusError):
    def __init__(self, doc_id):
        super().__init__(f"no metadata record for document {doc_id!r}")
        self.doc_id = doc_id


class UnknownLeaning(CorpusError):
    def __init__(self, label):
        super().__init__(f"unknown leaning label {label!r}")
        self.label = label


# --- coref ---

class BadCoordinate(SufaError):
    def __init__(self, doc_id, sent_id, token_id):
        super().__init__(f"no token at ({doc_id!r}, {sent_id!r}, {token_id})")
        self.doc_id = doc_id
        self.sent_id = sent_id
        self.token_id = token_id


# --- lexicon ---

class LexiconError(SufaError):
    pass


class EmptyKeywordSet(LexiconError):
    def __init__(self, entity):
        super().__init__(f"entity {entity!r} has an empty keyword set")
        self.entity = entity


class NoVectorsForEntity(SufaError):
    def __init__(self, entity):
        super().__init__(f"no keyword of entity {entity!r} has a vector")
        self.entity = entity


# --- embedding ---

class VectorFileError(SufaError):
    pass


class EmptyFile(VectorFileError):
    pass


class DimensionMismatch(VectorFileError):
    pass


class TransportError(SufaError):
    def __init__(self, detail, status=None):
        super().__init__(f"embedding endpoint failure: {detail}")
        self.status = status


class ProtocolError(SufaError):
    pass


class ZeroVector(SufaError):
    pass


# --- clustering ---

class ClusteringError(SufaError):
    pass


class KTooLarge(ClusteringError):
    def __init__(self, k, distinct):
        super().__init__(f"k={k} exceeds the {distinct} distinct point(s)")
        self.k = k
        self.distinct = distinct


class DegenerateInput(ClusteringError):
    pass


class SingleCluster(ClusteringError):
    pass


class NoEmbeddableModifiers(ClusteringError):
    def __init__(self, entity, oov):
        super().__init__(f"no modifier of entity {entity!r} has a vector")
        self.entity = entity
        self.oov = oov


# --- aggregation ---

class UnknownEntity(SufaError):
    def __init__(self, entity):
        super().__init__(f"entity {entity!r} not present in the table")
        self.entity = entity


# --- coding sessions ---

class CodingError(SufaError):
    pass


class NoComponents(CodingError):
    def __init__(self, entity):
        super().__init__(f"no components extracted for entity {entity!r}")
        self.entity = entity


class UnknownPair(CodingError):
    def __init__(self, modifier, relation):
        super().__init__(f"pair ({modifier!r}, {relation!r}) was never extracted")
        self.modifier = modifier
        self.relation = relation


class UnknownGroup(CodingError):
    def __init__(self, label):
        super().__init__(f"no group labeled {label!r}")
        self.label = label


class SelfMerge(CodingError):
    def __init__(self, label):
        super().__init__(f"cannot merge group {label!r} with itself")
        self.label = label


# --- warnings (reported, never fatal) ---

class AmbiguousKeyword(UserWarning):
    """A keyword appears in more than one entity lexicon; the first-listed wins."""


class UnknownRelationWarning(UserWarning):
    """A whitelisted relation is outside the known relation inventory."""


class DuplicateWordWarning(UserWarning):
    """A vector file lists a word twice; the first occurrence is kept."""


class FingerprintMismatch(UserWarning):
    """A coding session was reopened against a changed component dump."""

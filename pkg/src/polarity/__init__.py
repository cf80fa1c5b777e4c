"""Multilingual polarity classification over searched text transformations."""
from .textproc import CrossLangParams, EntityAction, EmoticonMap, normalize
from .langpack import LangParams, LanguagePack, get_pack
from .tokenizer import TokenType, build_term_bag
from .vectorize import TermVector, Vocabulary, build_vocabulary, tfidf
from .classify import LinearModel, train
from .corpus import LabeledDocument, ingest, corpus_stats
from .modelsel import TransformConfig, cross_validate, select_model, space_size
from .pipeline import PolarityModel, TextPipeline

__version__ = "0.1.0"

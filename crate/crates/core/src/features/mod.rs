//! Feature templates, extraction, dictionary, and part scoring.

mod dictionary;
mod extract;
mod pos;
mod scoring;
mod templates;
mod weights;

pub use dictionary::{build_dictionary, FeatureDictionary, LineReader};
pub use extract::{escape_value, extract_part_features, for_each_feature, part_type, BOS, EOS, NONE_SYMBOL};
pub use pos::{coarsen_pos, LanguageProfile};
pub use scoring::{components, enclosed_parts, score_parts, SentenceFeatures};
pub use templates::{catalog, templates_for, Atom, Attr, FeatureTemplateId, Role, Template, TEMPLATE_CATALOG_VERSION};
pub use weights::WeightVector;

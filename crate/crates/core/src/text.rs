//! Label and name normalization.

use thiserror::Error;
use unicode_normalization::UnicodeNormalization;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("factor name is empty after normalization")]
pub struct EmptyName;

/// Normalized form of a characteristic label: Unicode NFC with surrounding
/// whitespace removed. Comparison stays case-sensitive.
pub fn normalize_label(label: &str) -> String {
    label.nfc().collect::<String>().trim().to_string()
}

/// Key under which factors are merged across references.
///
/// Lowercases, applies NFC, collapses internal whitespace and joins the
/// words with hyphens: `"Containing  Subflows "` becomes
/// `"containing-subflows"`.
pub fn normalize_factor_name(name: &str) -> Result<String, EmptyName> {
    let composed: String = name.nfc().collect();
    let lowered = composed.to_lowercase();
    let key = lowered.split_whitespace().collect::<Vec<_>>().join("-");
    if key.is_empty() {
        Err(EmptyName)
    } else {
        Ok(key)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn normalizes_stated_examples() {
        assert_eq!(
            normalize_factor_name("Containing  Subflows ").unwrap(),
            "containing-subflows"
        );
        assert_eq!(normalize_factor_name("passive voice").unwrap(), "passive-voice");
        assert_eq!(
            normalize_factor_name("Anaphora").unwrap(),
            normalize_factor_name("anaphora").unwrap()
        );
    }

    #[test]
    fn rejects_blank_names() {
        assert_eq!(normalize_factor_name(""), Err(EmptyName));
        assert_eq!(normalize_factor_name(" \t\n "), Err(EmptyName));
    }

    #[test]
    fn composes_decomposed_input() {
        // "e" + combining acute accent vs precomposed "é"
        assert_eq!(
            normalize_factor_name("Cafe\u{301}").unwrap(),
            normalize_factor_name("café").unwrap()
        );
        assert_eq!(normalize_label(" cafe\u{301} "), "café");
    }

    #[test]
    fn labels_keep_case() {
        assert_eq!(normalize_label("Use Case"), "Use Case");
        assert_ne!(normalize_label("Use Case"), normalize_label("use case"));
    }

    proptest! {
        #[test]
        fn factor_key_is_idempotent(name in "[ a-zA-ZÀ-ÿ\t]{0,24}") {
            if let Ok(key) = normalize_factor_name(&name) {
                prop_assert_eq!(normalize_factor_name(&key).unwrap(), key.clone());
                // full uppercasing is lossy (`ß` becomes `SS`), so use these
                prop_assert_eq!(normalize_factor_name(&name.to_lowercase()).unwrap(), key.clone());
                prop_assert_eq!(normalize_factor_name(&name.to_ascii_uppercase()).unwrap(), key);
            }
        }
    }
}

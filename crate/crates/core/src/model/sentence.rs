use crate::error::{Error, Result};
use crate::features::{coarsen_pos, LanguageProfile};

/// Form and tag of the artificial root token at index 0.
pub const ROOT_SYMBOL: &str = "<root>";

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Token {
    pub form: String,
    pub pos: String,
    pub cpos: String,
}

impl Token {
    /// Creates a token, deriving the coarse tag with `profile`.
    pub fn new(form: impl Into<String>, pos: impl Into<String>, profile: LanguageProfile) -> Self {
        let pos = pos.into();
        let cpos = coarsen_pos(&pos, profile);
        Token {
            form: form.into(),
            pos,
            cpos,
        }
    }

    pub fn root() -> Self {
        Token {
            form: ROOT_SYMBOL.to_owned(),
            pos: ROOT_SYMBOL.to_owned(),
            cpos: ROOT_SYMBOL.to_owned(),
        }
    }
}

/// A tokenized sentence. Position 0 holds the root pseudo-token and words
/// occupy positions `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    tokens: Vec<Token>,
}

impl Sentence {
    /// Builds a sentence from `(form, fine POS)` pairs.
    pub fn new<I, F, P>(words: I, profile: LanguageProfile) -> Result<Self>
    where
        I: IntoIterator<Item = (F, P)>,
        F: Into<String>,
        P: Into<String>,
    {
        let words = words
            .into_iter()
            .map(|(form, pos)| Token::new(form, pos, profile))
            .collect();
        Self::from_words(words)
    }

    /// Builds a sentence from word tokens (the root is prepended).
    pub fn from_words(words: Vec<Token>) -> Result<Self> {
        if words.is_empty() {
            return Err(Error::EmptySentence);
        }
        if let Some(i) = words.iter().position(|t| t.form.is_empty()) {
            return Err(Error::EmptyForm(i + 1));
        }
        let mut tokens = Vec::with_capacity(words.len() + 1);
        tokens.push(Token::root());
        tokens.extend(words);
        Ok(Sentence { tokens })
    }

    /// Number of words, excluding the root.
    pub fn len(&self) -> usize {
        self.tokens.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Token at `index` (0 is the root).
    pub fn token(&self, index: usize) -> &Token {
        &self.tokens[index]
    }

    /// All tokens including the root at index 0.
    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    /// Word tokens `1..=n`.
    pub fn words(&self) -> &[Token] {
        &self.tokens[1..]
    }
}

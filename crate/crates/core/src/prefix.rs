//! Quantifier prefixes: data model, text grammar, runs and canonical forms.
//!
//! A prefix over `n` variables is stored as a permutation `sigma` of the
//! variable indices `0..n` together with one quantifier per position. The
//! variable index is the rank of the variable's name in lexicographic byte
//! order, so two prefixes parsed together always share one index space.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// A quantifier, numerically encoded as `Exists = 0`, `Forall = 1`.
///
/// The derived order follows the encoding, so `Forall > Exists`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum Quantifier {
    Exists = 0,
    Forall = 1,
}

impl Quantifier {
    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Quantifier::Forall
        } else {
            Quantifier::Exists
        }
    }

    pub fn bit(self) -> bool {
        self == Quantifier::Forall
    }

    pub fn is_exists(self) -> bool {
        self == Quantifier::Exists
    }

    pub fn is_forall(self) -> bool {
        self == Quantifier::Forall
    }

    pub fn flipped(self) -> Self {
        Self::from_bit(!self.bit())
    }

    /// ASCII token used on output.
    pub fn symbol(self) -> &'static str {
        match self {
            Quantifier::Exists => "E",
            Quantifier::Forall => "A",
        }
    }

    /// Accepts `A`/`E` and the Unicode `∀`/`∃`.
    pub fn from_token(token: &str) -> Option<Self> {
        match token {
            "A" | "∀" => Some(Quantifier::Forall),
            "E" | "∃" => Some(Quantifier::Exists),
            _ => None,
        }
    }
}

impl fmt::Display for Quantifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrefixError {
    #[error("syntax error at token {index} ({token:?}): expected {expected}")]
    Syntax {
        index: usize,
        token: String,
        expected: &'static str,
    },
    #[error("variable {0:?} is quantified more than once")]
    DuplicateVariable(String),
    #[error("the two prefixes do not quantify the same variables")]
    VariableSetMismatch,
    #[error("prefix is empty")]
    EmptyPrefix,
    #[error("sequence lengths differ: {sigma} variables, {quantifiers} quantifiers, {names} names")]
    LengthMismatch {
        sigma: usize,
        quantifiers: usize,
        names: usize,
    },
    #[error("sigma is not a permutation of 0..{0}")]
    NotPermutation(usize),
    #[error("invalid variable name {0:?}")]
    InvalidName(String),
    #[error("variable names must be listed in strictly ascending byte order")]
    UnsortedNames,
}

/// Returns true if `s` matches `[A-Za-z_][A-Za-z0-9_]*`.
pub fn is_identifier(s: &str) -> bool {
    let mut bytes = s.bytes();
    match bytes.next() {
        Some(b) if b.is_ascii_alphabetic() || b == b'_' => {}
        _ => return false,
    }
    bytes.all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

/// Names `x1..xn`, zero-padded to a common width so that byte order matches
/// numeric order.
pub fn generated_names(n: usize) -> Arc<[String]> {
    let width = n.to_string().len();
    (1..=n).map(|i| format!("x{i:0width$}")).collect()
}

/// A quantifier prefix over the variables `0..n`.
///
/// `sigma[i]` is the variable at position `i` and `quantifiers[i]` its
/// quantifier. `names[v]` is the name of variable `v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prefix {
    sigma: Vec<u32>,
    quantifiers: Vec<Quantifier>,
    names: Arc<[String]>,
}

impl Prefix {
    /// Builds a prefix, checking every structural invariant.
    pub fn new(
        sigma: Vec<u32>,
        quantifiers: Vec<Quantifier>,
        names: Arc<[String]>,
    ) -> Result<Self, PrefixError> {
        let n = sigma.len();
        if quantifiers.len() != n || names.len() != n {
            return Err(PrefixError::LengthMismatch {
                sigma: n,
                quantifiers: quantifiers.len(),
                names: names.len(),
            });
        }
        if n == 0 {
            return Err(PrefixError::EmptyPrefix);
        }
        let mut seen = vec![false; n];
        for &v in &sigma {
            match seen.get_mut(v as usize) {
                Some(slot) if !*slot => *slot = true,
                _ => return Err(PrefixError::NotPermutation(n)),
            }
        }
        if let Some(bad) = names.iter().find(|name| !is_identifier(name)) {
            return Err(PrefixError::InvalidName(bad.clone()));
        }
        if names.windows(2).any(|w| w[0] >= w[1]) {
            return Err(PrefixError::UnsortedNames);
        }
        Ok(Prefix {
            sigma,
            quantifiers,
            names,
        })
    }

    /// Builds a prefix over [`generated_names`].
    pub fn with_generated_names(
        sigma: Vec<u32>,
        quantifiers: Vec<Quantifier>,
    ) -> Result<Self, PrefixError> {
        let names = generated_names(sigma.len());
        Self::new(sigma, quantifiers, names)
    }

    /// Same variables and names, different order or quantifiers.
    pub(crate) fn with_parts_unchecked(&self, sigma: Vec<u32>, quantifiers: Vec<Quantifier>) -> Self {
        debug_assert_eq!(sigma.len(), self.len());
        debug_assert_eq!(quantifiers.len(), self.len());
        Prefix {
            sigma,
            quantifiers,
            names: Arc::clone(&self.names),
        }
    }

    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    /// Always false for a constructed prefix; present for API symmetry.
    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    pub fn sigma(&self) -> &[u32] {
        &self.sigma
    }

    pub fn quantifiers(&self) -> &[Quantifier] {
        &self.quantifiers
    }

    pub fn names(&self) -> &Arc<[String]> {
        &self.names
    }

    pub fn name(&self, var: u32) -> &str {
        &self.names[var as usize]
    }

    pub fn same_variables(&self, other: &Prefix) -> bool {
        self.names == other.names
    }

    /// `(variable, quantifier)` pairs in prefix order.
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (u32, Quantifier)> + ExactSizeIterator + '_ {
        self.sigma.iter().copied().zip(self.quantifiers.iter().copied())
    }

    /// Parses a single prefix; variable indices come from its own names.
    pub fn parse(text: &str) -> Result<Self, PrefixError> {
        let tokens = tokenize(text)?;
        let mut names: Vec<String> = tokens.iter().map(|(_, n)| n.to_string()).collect();
        names.sort_unstable();
        check_duplicates(&names)?;
        build(&tokens, names.into())
    }

    /// Maximal constant-quantifier segments, in order.
    pub fn runs(&self) -> Vec<Run> {
        let mut out = Vec::new();
        let mut start = 0;
        for chunk in self.quantifiers.chunk_by(|a, b| a == b) {
            out.push(Run {
                start,
                len: chunk.len(),
                quant: chunk[0],
            });
            start += chunk.len();
        }
        out
    }

    /// Sorts the variables of every run into ascending index order.
    pub fn canonicalize(&self) -> CanonicalClass {
        let mut sigma = self.sigma.clone();
        for run in self.runs() {
            sigma[run.start..run.start + run.len].sort_unstable();
        }
        CanonicalClass {
            rep: self.with_parts_unchecked(sigma, self.quantifiers.clone()),
        }
    }

    /// True iff both prefixes lie in the same class, i.e. differ only by
    /// reordering variables inside runs.
    pub fn equivalent(&self, other: &Prefix) -> Result<bool, PrefixError> {
        if !self.same_variables(other) {
            return Err(PrefixError::VariableSetMismatch);
        }
        if self.quantifiers != other.quantifiers {
            return Ok(false);
        }
        Ok(self.canonicalize() == other.canonicalize())
    }
}

impl fmt::Display for Prefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (var, quant)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{} {}", quant, self.name(var))?;
        }
        Ok(())
    }
}

/// ASCII text of a prefix: `A`/`E`, a space, the name; single-space separated.
pub fn format_prefix(p: &Prefix) -> String {
    p.to_string()
}

/// A maximal run of identical quantifiers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Run {
    pub start: usize,
    pub len: usize,
    pub quant: Quantifier,
}

impl Run {
    pub fn end(&self) -> usize {
        self.start + self.len
    }
}

/// Representative of an equivalence class: variables ascending within each run.
///
/// Ordered by the canonical text of the representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CanonicalClass {
    rep: Prefix,
}

impl CanonicalClass {
    pub fn rep(&self) -> &Prefix {
        &self.rep
    }

    pub fn into_rep(self) -> Prefix {
        self.rep
    }
}

impl fmt::Display for CanonicalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.rep.fmt(f)
    }
}

impl Ord for CanonicalClass {
    fn cmp(&self, other: &Self) -> Ordering {
        // Token-wise comparison agrees with comparing the rendered text: the
        // separating space sorts below every identifier byte.
        let a = self.rep.iter().map(|(v, q)| (q.symbol(), self.rep.name(v).as_bytes()));
        let b = other.rep.iter().map(|(v, q)| (q.symbol(), other.rep.name(v).as_bytes()));
        a.cmp(b)
    }
}

impl PartialOrd for CanonicalClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Parses two prefixes over one shared variable set.
pub fn parse_prefix_pair(lhs: &str, rhs: &str) -> Result<(Prefix, Prefix), PrefixError> {
    let lhs_tokens = tokenize(lhs)?;
    let rhs_tokens = tokenize(rhs)?;

    let mut lhs_names: Vec<&str> = lhs_tokens.iter().map(|(_, n)| *n).collect();
    let mut rhs_names: Vec<&str> = rhs_tokens.iter().map(|(_, n)| *n).collect();
    lhs_names.sort_unstable();
    rhs_names.sort_unstable();
    check_duplicates(&lhs_names)?;
    check_duplicates(&rhs_names)?;
    if lhs_names != rhs_names {
        return Err(PrefixError::VariableSetMismatch);
    }

    let names: Arc<[String]> = lhs_names.iter().map(|s| s.to_string()).collect();
    Ok((build(&lhs_tokens, names.clone())?, build(&rhs_tokens, names)?))
}

fn tokenize(text: &str) -> Result<Vec<(Quantifier, &str)>, PrefixError> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    if tokens.is_empty() {
        return Err(PrefixError::EmptyPrefix);
    }
    let mut out = Vec::with_capacity(tokens.len() / 2);
    let mut iter = tokens.iter().enumerate();
    while let Some((index, &tok)) = iter.next() {
        let quant = Quantifier::from_token(tok).ok_or_else(|| PrefixError::Syntax {
            index,
            token: tok.to_string(),
            expected: "quantifier (A, E, ∀ or ∃)",
        })?;
        let (index, &name) = iter.next().ok_or(PrefixError::Syntax {
            index: index + 1,
            token: String::new(),
            expected: "variable name after quantifier",
        })?;
        if !is_identifier(name) {
            return Err(PrefixError::Syntax {
                index,
                token: name.to_string(),
                expected: "identifier [A-Za-z_][A-Za-z0-9_]*",
            });
        }
        out.push((quant, name));
    }
    Ok(out)
}

fn check_duplicates<S: AsRef<str>>(sorted: &[S]) -> Result<(), PrefixError> {
    match sorted.windows(2).find(|w| w[0].as_ref() == w[1].as_ref()) {
        Some(w) => Err(PrefixError::DuplicateVariable(w[0].as_ref().to_string())),
        None => Ok(()),
    }
}

fn build(tokens: &[(Quantifier, &str)], names: Arc<[String]>) -> Result<Prefix, PrefixError> {
    let sigma = tokens
        .iter()
        .map(|(_, name)| {
            names
                .binary_search_by(|probe| probe.as_str().cmp(name))
                .map(|i| i as u32)
                .map_err(|_| PrefixError::VariableSetMismatch)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let quantifiers = tokens.iter().map(|(q, _)| *q).collect();
    Prefix::new(sigma, quantifiers, names)
}

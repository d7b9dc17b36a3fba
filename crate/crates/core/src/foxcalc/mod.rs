//! Free differential calculus: group presentations with a map to `Z^m`,
//! Fox derivatives, Alexander matrices and the chain complex of the
//! presentation 2-complex.
//!
//! Text format: `gens: x y; rels: x y x Y X Y, x Y; phi: x->t1, y->t1`.
//! Relators are separated by commas and letters by spaces; a capitalized
//! generator is its inverse and `x^k` is a power. Words made of one-letter
//! generators may also be written without spaces (`xyxYXY`). Without a
//! `phi` clause the generators map to the free part of the abelianization.

mod fixtures;

pub use fixtures::{builtin_fixture, fixture_names, Expectation, Fixture};

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::alexmod::{ChainComplex, Presentation};
use crate::error::{Error, Result};
use crate::laurent::{LaurentMat, LaurentPoly};
use crate::snf::{smith_normal_form, IntMatrix};

/// A freely reduced word: generator indices with exponent `+1` or `-1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word(Vec<(usize, i8)>);

impl Word {
    /// Freely reduces the given letters.
    pub fn new(letters: impl IntoIterator<Item = (usize, i8)>) -> Self {
        let mut out: Vec<(usize, i8)> = Vec::new();
        for (g, s) in letters {
            assert!(s == 1 || s == -1, "letters have exponent +-1");
            if out.last() == Some(&(g, -s)) {
                out.pop();
            } else {
                out.push((g, s));
            }
        }
        Self(out)
    }

    pub fn letters(&self) -> &[(usize, i8)] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.iter().rev().map(|&(g, s)| (g, -s)).collect())
    }

    pub fn concat(&self, other: &Self) -> Self {
        Self::new(self.0.iter().chain(&other.0).copied())
    }

    /// Exponent sum of each of `n` generators.
    pub fn exponent_sums(&self, n: usize) -> Vec<i64> {
        let mut v = vec![0; n];
        for &(g, s) in &self.0 {
            v[g] += s as i64;
        }
        v
    }
}

/// Generators, relators and a homomorphism to `Z^m` given by the image of
/// each generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupPresentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
    /// `abelianization[j]` is the image of generator `j` in `Z^m`.
    pub abelianization: Vec<Vec<i64>>,
}

impl GroupPresentation {
    /// Checks that every relator maps to zero.
    pub fn new(generators: Vec<String>, relators: Vec<Word>, abelianization: Vec<Vec<i64>>) -> Result<Self> {
        if abelianization.len() != generators.len() {
            return Err(Error::Dimension("one abelianization image per generator".into()));
        }
        let m = abelianization.first().map_or(0, Vec::len);
        if abelianization.iter().any(|v| v.len() != m) {
            return Err(Error::Dimension("abelianization images of different lengths".into()));
        }
        let p = Self { generators, relators, abelianization };
        for (i, r) in p.relators.iter().enumerate() {
            if p.image(r).iter().any(|&x| x != 0) {
                return Err(Error::Invariant(format!("relator {} does not map to zero in Z^{m}", i + 1)));
            }
        }
        Ok(p)
    }

    /// Abelianization map onto the free part of `Z^g / <exponent sums>`.
    pub fn with_default_abelianization(generators: Vec<String>, relators: Vec<Word>) -> Result<Self> {
        let g = generators.len();
        let rows: Vec<Vec<i64>> = relators.iter().map(|r| r.exponent_sums(g)).collect();
        let phi = if rows.is_empty() {
            (0..g).map(|j| (0..g).map(|k| i64::from(j == k)).collect()).collect()
        } else {
            let r = IntMatrix::<BigInt>::from_i64_rows(&rows)?;
            let s = smith_normal_form(&r, true);
            let (_, v) = s.transforms.expect("requested");
            // x in Z^g has coordinates x V; the last g - rank are free.
            (0..g).map(|j| (s.rank..g).map(|k| i64::try_from(v.get(j, k)).expect("small transform entries")).collect()).collect()
        };
        Self::new(generators, relators, phi)
    }

    pub fn num_vars(&self) -> usize {
        self.abelianization.first().map_or(0, Vec::len)
    }

    /// Image of a word in `Z^m`.
    pub fn image(&self, w: &Word) -> Vec<i64> {
        let mut v = vec![0; self.num_vars()];
        for &(g, s) in w.letters() {
            for (x, a) in v.iter_mut().zip(&self.abelianization[g]) {
                *x += s as i64 * a;
            }
        }
        v
    }

    pub fn generator_index(&self, name: &str) -> Result<usize> {
        self.generators.iter().position(|g| g == name).ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    /// Parses a word over this presentation's generators.
    pub fn parse_word(&self, s: &str) -> Result<Word> {
        parse_word(&self.generators, s)
    }

    pub fn word_to_string(&self, w: &Word) -> String {
        w.letters()
            .iter()
            .map(|&(g, s)| if s > 0 { self.generators[g].clone() } else { capitalize(&self.generators[g]) })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// `phi(x_j) - 1` for each generator.
    fn boundary_row(&self) -> Vec<LaurentPoly> {
        let m = self.num_vars();
        self.abelianization.iter().map(|e| LaurentPoly::monomial(m, e.clone(), 1) - LaurentPoly::one(m)).collect()
    }
}

fn capitalize(name: &str) -> String {
    let mut c = name.chars();
    match c.next() {
        Some(first) => first.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

fn parse_letter(gens: &[String], tok: &str) -> Option<(usize, i64)> {
    let (base, power) = match tok.split_once('^') {
        Some((b, e)) => (b, e.trim().parse::<i64>().ok()?),
        None => (tok, 1),
    };
    if let Some(g) = gens.iter().position(|g| g == base) {
        return Some((g, power));
    }
    gens.iter().position(|g| capitalize(g) == base && g != base).map(|g| (g, -power))
}

fn parse_word(gens: &[String], s: &str) -> Result<Word> {
    let mut letters = Vec::new();
    for tok in s.split_whitespace() {
        let tok_letters: Vec<(usize, i64)> = match parse_letter(gens, tok) {
            Some(l) => vec![l],
            None => tok
                .chars()
                .map(|c| parse_letter(gens, &c.to_string()).ok_or_else(|| Error::UnknownGenerator(tok.to_string())))
                .collect::<Result<_>>()?,
        };
        for (g, k) in tok_letters {
            let s = if k > 0 { 1 } else { -1 };
            letters.extend(std::iter::repeat_n((g, s), k.unsigned_abs() as usize));
        }
    }
    Ok(Word::new(letters))
}

/// Parses `x->t1*t2^-1` style images.
fn parse_image(s: &str, m: usize) -> Result<Vec<i64>> {
    let p = LaurentPoly::parse_with_vars(s.trim(), m)?;
    match p.leading_term() {
        Some((e, c)) if p.is_monomial() && *c == BigInt::from(1) => Ok(e.clone()),
        _ => Err(Error::Parse(format!("abelianization image `{s}` is not a monomial"))),
    }
}

fn var_count(images: &[&str]) -> usize {
    images
        .iter()
        .flat_map(|s| {
            s.split(|c: char| !c.is_ascii_alphanumeric())
                .filter_map(|t| t.strip_prefix('t'))
                .filter_map(|d| d.parse::<usize>().ok())
                .collect::<Vec<_>>()
        })
        .max()
        .unwrap_or(0)
}

impl FromStr for GroupPresentation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut gens: Option<Vec<String>> = None;
        let mut rels_text = String::new();
        let mut phi_text: Option<String> = None;
        for clause in s.split(';') {
            let clause = clause.trim();
            if clause.is_empty() {
                continue;
            }
            let (key, value) = clause.split_once(':').ok_or_else(|| Error::Parse(format!("expected `key: value`, found `{clause}`")))?;
            match key.trim() {
                "gens" => gens = Some(value.split_whitespace().map(str::to_string).collect()),
                "rels" => rels_text = value.to_string(),
                "phi" => phi_text = Some(value.to_string()),
                other => return Err(Error::Parse(format!("unknown clause `{other}`"))),
            }
        }
        let gens = gens.ok_or_else(|| Error::Parse("missing `gens` clause".into()))?;
        for g in &gens {
            if !g.chars().next().is_some_and(|c| c.is_lowercase()) {
                return Err(Error::Parse(format!("generator `{g}` must start with a lowercase letter")));
            }
        }
        let relators: Vec<Word> =
            rels_text.split(',').map(str::trim).filter(|r| !r.is_empty()).map(|r| parse_word(&gens, r)).collect::<Result<_>>()?;
        let Some(phi_text) = phi_text else {
            return Self::with_default_abelianization(gens, relators);
        };
        let pairs: Vec<(&str, &str)> = phi_text
            .split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(|p| p.split_once("->").ok_or_else(|| Error::Parse(format!("expected `x->t1`, found `{p}`"))))
            .collect::<Result<_>>()?;
        let m = var_count(&pairs.iter().map(|p| p.1).collect::<Vec<_>>()).max(1);
        let mut images: Vec<Option<Vec<i64>>> = vec![None; gens.len()];
        for (g, img) in pairs {
            let j = gens.iter().position(|x| x == g.trim()).ok_or_else(|| Error::UnknownGenerator(g.trim().into()))?;
            images[j] = Some(parse_image(img, m)?);
        }
        let abelianization = images
            .into_iter()
            .enumerate()
            .map(|(j, v)| v.ok_or_else(|| Error::Parse(format!("no image for generator `{}`", gens[j]))))
            .collect::<Result<_>>()?;
        Self::new(gens, relators, abelianization)
    }
}

impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relators.iter().map(|r| self.word_to_string(r)).collect();
        let m = self.num_vars();
        let phi: Vec<String> = self
            .generators
            .iter()
            .zip(&self.abelianization)
            .map(|(g, e)| format!("{g}->{}", LaurentPoly::monomial(m, e.clone(), 1)))
            .collect();
        write!(f, "gens: {}; rels: {}; phi: {}", self.generators.join(" "), rels.join(", "), phi.join(", "))
    }
}

/// Image of `∂w/∂x_j` in `Z[Z^m]`.
pub fn fox_derivative(p: &GroupPresentation, w: &Word, j: usize) -> Result<LaurentPoly> {
    if j >= p.generators.len() {
        return Err(Error::UnknownGenerator(format!("#{j}")));
    }
    let m = p.num_vars();
    let mut prefix = vec![0i64; m];
    let mut out = LaurentPoly::zero(m);
    for &(g, s) in w.letters() {
        let step = &p.abelianization[g];
        if s < 0 {
            for (x, a) in prefix.iter_mut().zip(step) {
                *x -= a;
            }
        }
        if g == j {
            // d(x)/dx = 1 and d(x^-1)/dx = -x^-1, both after the prefix.
            out = out + LaurentPoly::monomial(m, prefix.clone(), s as i64);
        }
        if s > 0 {
            for (x, a) in prefix.iter_mut().zip(step) {
                *x += a;
            }
        }
    }
    Ok(out)
}

/// [`fox_derivative`] by generator name.
pub fn fox_derivative_by_name(p: &GroupPresentation, w: &Word, name: &str) -> Result<LaurentPoly> {
    fox_derivative(p, w, p.generator_index(name)?)
}

/// `J_ij = ∂r_i/∂x_j`.
pub fn fox_jacobian(p: &GroupPresentation) -> Result<LaurentMat> {
    let rows: Vec<Vec<LaurentPoly>> = p
        .relators
        .iter()
        .map(|r| (0..p.generators.len()).map(|j| fox_derivative(p, r, j)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    if rows.is_empty() {
        return Ok(LaurentMat::zeros(0, p.generators.len(), p.num_vars()));
    }
    LaurentMat::from_rows(p.num_vars(), rows)
}

/// The Alexander module presentation `J^T` (generators by relators), and
/// the chain complex `C_2 -> C_1 -> C_0` of the presentation 2-complex
/// with `d_1 = (phi(x_j) - 1)` and `d_2 = J^T`.
pub fn alexander_matrix_from_presentation(p: &GroupPresentation) -> Result<(Presentation, ChainComplex)> {
    for (i, r) in p.relators.iter().enumerate() {
        if p.image(r).iter().any(|&x| x != 0) {
            return Err(Error::Invariant(format!("relator {} does not map to zero", i + 1)));
        }
    }
    let m = p.num_vars();
    let jt = fox_jacobian(p)?.transpose();
    let d1 = LaurentMat::from_rows(m, vec![p.boundary_row()])?;
    let complex = ChainComplex::new(m, vec![d1, jt.clone()])?;
    Ok((Presentation::new(jt), complex))
}

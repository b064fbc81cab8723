//! Words in the Dehn twists `t_a`, `t_b` generating the torus mapping class
//! group, their images in SL(2, Z), and the rewriting moves that turn the
//! monodromy `(t_a t_b)^{6n}` of `E(n)` into a factorization with one `I_{8n}`
//! fiber, `2n - 1` double nodes and two fishtails.
//!
//! Matrix convention: `t_a = [[1, 1], [0, 1]]`, `t_b = [[1, 0], [-1, 1]]`,
//! words multiplied left to right. This pair satisfies the braid relation and
//! `(t_a t_b)^6 = 1`, and matrix equality is the only word equality used.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Curve {
    A,
    B,
}

/// A Dehn twist `t_a`, `t_b` or an inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwistLetter {
    pub curve: Curve,
    pub inverse: bool,
}

impl TwistLetter {
    pub const A: TwistLetter = TwistLetter {
        curve: Curve::A,
        inverse: false,
    };
    pub const B: TwistLetter = TwistLetter {
        curve: Curve::B,
        inverse: false,
    };
    pub const A_INV: TwistLetter = TwistLetter {
        curve: Curve::A,
        inverse: true,
    };
    pub const B_INV: TwistLetter = TwistLetter {
        curve: Curve::B,
        inverse: true,
    };

    pub fn inverted(self) -> Self {
        TwistLetter {
            inverse: !self.inverse,
            ..self
        }
    }

    pub fn exponent_sign(self) -> i8 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn as_char(self) -> char {
        match (self.curve, self.inverse) {
            (Curve::A, false) => 'a',
            (Curve::B, false) => 'b',
            (Curve::A, true) => 'A',
            (Curve::B, true) => 'B',
        }
    }

    fn from_char(c: char) -> Option<Self> {
        match c {
            'a' => Some(TwistLetter::A),
            'b' => Some(TwistLetter::B),
            'A' => Some(TwistLetter::A_INV),
            'B' => Some(TwistLetter::B_INV),
            _ => None,
        }
    }

    pub fn matrix(self) -> Sl2Matrix {
        let m = match self.curve {
            Curve::A => [[1, 1], [0, 1]],
            Curve::B => [[1, 0], [-1, 1]],
        };
        let m = Sl2Matrix::from_i64(m);
        if self.inverse {
            m.inverse()
        } else {
            m
        }
    }
}

/// An element of SL(2, Z) with arbitrary-precision entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sl2Matrix {
    entries: [[BigInt; 2]; 2],
}

impl Sl2Matrix {
    pub fn identity() -> Self {
        Sl2Matrix::from_i64([[1, 0], [0, 1]])
    }

    pub fn from_i64(m: [[i64; 2]; 2]) -> Self {
        Sl2Matrix {
            entries: m.map(|row| row.map(BigInt::from)),
        }
    }

    pub fn entries(&self) -> &[[BigInt; 2]; 2] {
        &self.entries
    }

    pub fn determinant(&self) -> BigInt {
        let [[a, b], [c, d]] = &self.entries;
        a * d - b * c
    }

    pub fn is_identity(&self) -> bool {
        *self == Sl2Matrix::identity()
    }

    pub fn inverse(&self) -> Self {
        let [[a, b], [c, d]] = &self.entries;
        Sl2Matrix {
            entries: [[d.clone(), -b], [-c, a.clone()]],
        }
    }

    pub fn mul(&self, rhs: &Sl2Matrix) -> Self {
        let x = &self.entries;
        let y = &rhs.entries;
        let cell = |i: usize, j: usize| &x[i][0] * &y[0][j] + &x[i][1] * &y[1][j];
        Sl2Matrix {
            entries: [[cell(0, 0), cell(0, 1)], [cell(1, 0), cell(1, 1)]],
        }
    }
}

impl fmt::Display for Sl2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = &self.entries;
        write!(f, "[[{a}, {b}], [{c}, {d}]]")
    }
}

impl Serialize for Sl2Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self
            .entries
            .iter()
            .map(|r| r.iter().map(BigInt::to_string).collect())
            .collect();
        rows.serialize(s)
    }
}

/// A finite word in twist letters; the empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct McgWord {
    letters: Vec<TwistLetter>,
}

impl McgWord {
    pub fn new(letters: Vec<TwistLetter>) -> Self {
        McgWord { letters }
    }

    pub fn identity() -> Self {
        McgWord::default()
    }

    /// `letter^k`; negative `k` repeats the inverse letter.
    pub fn letter_power(letter: TwistLetter, k: i64) -> Self {
        let l = if k < 0 { letter.inverted() } else { letter };
        McgWord::new(vec![l; k.unsigned_abs() as usize])
    }

    pub fn letters(&self) -> &[TwistLetter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        McgWord::new(self.letters.iter().rev().map(|l| l.inverted()).collect())
    }

    pub fn concat(&self, other: &McgWord) -> Self {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        McgWord::new(letters)
    }

    pub fn power(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut letters = Vec::with_capacity(base.len() * k.unsigned_abs() as usize);
        for _ in 0..k.unsigned_abs() {
            letters.extend_from_slice(&base.letters);
        }
        McgWord::new(letters)
    }

    /// Count of positive letters.
    pub fn positive_count(&self) -> usize {
        self.letters.iter().filter(|l| !l.inverse).count()
    }

    fn splice(&self, pos: usize, len: usize, replacement: &[TwistLetter]) -> McgWord {
        let mut letters = Vec::with_capacity(self.len() - len + replacement.len());
        letters.extend_from_slice(&self.letters[..pos]);
        letters.extend_from_slice(replacement);
        letters.extend_from_slice(&self.letters[pos + len..]);
        McgWord::new(letters)
    }

    fn check_range(&self, pos: usize, len: usize) -> Result<()> {
        if pos.checked_add(len).is_none_or(|end| end > self.len()) {
            return Err(Error::Range {
                pos,
                end: pos.saturating_add(len),
                len: self.len(),
            });
        }
        Ok(())
    }
}

/// Run-length rendering, e.g. `a^8 b a^2 b^2 A^2`. Parses back to the same
/// word.
impl fmt::Display for McgWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("1");
        }
        let mut first = true;
        for run in self.letters.chunk_by(|x, y| x == y) {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            match run.len() {
                1 => write!(f, "{}", run[0].as_char())?,
                k => write!(f, "{}^{}", run[0].as_char(), k)?,
            }
        }
        Ok(())
    }
}

impl Serialize for McgWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for McgWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_word(s)
    }
}

/// Parses `word := block+`, `block := letter ['^' int] | '(' word ')' ['^' int]`,
/// letters `a b A B` (uppercase is the inverse), whitespace ignored.
pub fn parse_word(text: &str) -> Result<McgWord> {
    let mut p = WordParser {
        chars: text.char_indices().collect(),
        idx: 0,
        end: text.len(),
    };
    let word = p.word()?;
    p.skip_ws();
    if let Some(&(pos, c)) = p.chars.get(p.idx) {
        return Err(p.error_at(pos, format!("unexpected {c:?}")));
    }
    Ok(word)
}

struct WordParser {
    chars: Vec<(usize, char)>,
    idx: usize,
    end: usize,
}

impl WordParser {
    fn skip_ws(&mut self) {
        while self
            .chars
            .get(self.idx)
            .is_some_and(|(_, c)| c.is_whitespace())
        {
            self.idx += 1;
        }
    }

    fn peek(&mut self) -> Option<(usize, char)> {
        self.skip_ws();
        self.chars.get(self.idx).copied()
    }

    fn pos(&mut self) -> usize {
        self.peek().map_or(self.end, |(p, _)| p)
    }

    fn error_at(&self, position: usize, message: String) -> Error {
        Error::Parse { position, message }
    }

    fn word(&mut self) -> Result<McgWord> {
        let mut letters = Vec::new();
        loop {
            match self.peek() {
                Some((_, c)) if c == '(' || TwistLetter::from_char(c).is_some() => {
                    letters.extend(self.block()?.letters);
                }
                _ => break,
            }
        }
        if letters.is_empty() {
            let pos = self.pos();
            return Err(self.error_at(pos, "expected a letter or '('".into()));
        }
        Ok(McgWord::new(letters))
    }

    fn block(&mut self) -> Result<McgWord> {
        let (pos, c) = self.peek().expect("caller checked");
        let base = if c == '(' {
            self.idx += 1;
            let inner = self.word()?;
            match self.peek() {
                Some((_, ')')) => self.idx += 1,
                _ => {
                    let at = self.pos();
                    return Err(self.error_at(at, format!("unclosed '(' opened at {pos}")));
                }
            }
            inner
        } else {
            self.idx += 1;
            McgWord::new(vec![TwistLetter::from_char(c).expect("caller checked")])
        };
        if let Some((_, '^')) = self.peek() {
            self.idx += 1;
            let k = self.int()?;
            Ok(base.power(k))
        } else {
            Ok(base)
        }
    }

    fn int(&mut self) -> Result<i64> {
        let start = self.pos();
        let mut digits = String::new();
        if let Some((_, '-')) = self.peek() {
            digits.push('-');
            self.idx += 1;
        }
        while let Some(&(_, c)) = self.chars.get(self.idx) {
            if c.is_ascii_digit() {
                digits.push(c);
                self.idx += 1;
            } else {
                break;
            }
        }
        digits
            .parse()
            .map_err(|_| self.error_at(start, "expected an integer exponent".into()))
    }
}

/// Product of the letter matrices in word order; the empty word gives the
/// identity.
pub fn evaluate(w: &McgWord) -> Sl2Matrix {
    w.letters
        .iter()
        .fold(Sl2Matrix::identity(), |acc, l| acc.mul(&l.matrix()))
}

/// Rewrites the positive window at `pos..pos + 3` between `aba` and `bab`.
pub fn apply_braid(w: &McgWord, pos: usize) -> Result<McgWord> {
    use TwistLetter as L;
    let window = w
        .letters
        .get(pos..pos + 3)
        .ok_or(Error::NoBraidMatch { pos })?;
    let replacement = match window {
        [L::A, L::B, L::A] => [L::B, L::A, L::B],
        [L::B, L::A, L::B] => [L::A, L::B, L::A],
        _ => return Err(Error::NoBraidMatch { pos }),
    };
    Ok(w.splice(pos, 3, &replacement))
}

/// Replaces the segment `s = w[pos..pos + len]` by `by * s * by^-1`.
///
/// With an empty segment this inserts `by * by^-1` and the evaluation is
/// unchanged; with the whole word it conjugates the evaluation.
pub fn conjugate_move(w: &McgWord, pos: usize, len: usize, by: &McgWord) -> Result<McgWord> {
    w.check_range(pos, len)?;
    let segment = McgWord::new(w.letters[pos..pos + len].to_vec());
    let replacement = by.concat(&segment).concat(&by.inverse());
    Ok(w.splice(pos, len, &replacement.letters))
}

/// Free reduction: removes adjacent `x x^-1` pairs until none remain.
pub fn cancel_pairs(w: &McgWord) -> McgWord {
    let mut out: Vec<TwistLetter> = Vec::with_capacity(w.len());
    for &l in &w.letters {
        if out.last() == Some(&l.inverted()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    McgWord::new(out)
}

/// Free reduction restricted to the segment `pos..pos + len`.
pub fn cancel_pairs_within(w: &McgWord, pos: usize, len: usize) -> Result<McgWord> {
    w.check_range(pos, len)?;
    let reduced = cancel_pairs(&McgWord::new(w.letters[pos..pos + len].to_vec()));
    Ok(w.splice(pos, len, &reduced.letters))
}

/// Singular fiber census of a genus-1 Lefschetz fibration.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FiberCensus {
    /// Largest `I_k` with `k >= 3`.
    pub necklace: Option<u64>,
    /// Any further `I_k`, `k >= 3`, in descending order.
    pub other_necklaces: Vec<u64>,
    pub i2_count: u64,
    pub fishtail_count: u64,
}

impl FiberCensus {
    /// Number of right-handed twists, i.e. critical points.
    pub fn twist_count(&self) -> u64 {
        self.necklace.unwrap_or(0)
            + self.other_necklaces.iter().sum::<u64>()
            + 2 * self.i2_count
            + self.fishtail_count
    }

    fn record(&mut self, k: u64) {
        match k {
            1 => self.fishtail_count += 1,
            2 => self.i2_count += 1,
            _ => match self.necklace {
                Some(cur) if cur >= k => self.other_necklaces.push(k),
                Some(cur) => {
                    self.other_necklaces.push(cur);
                    self.necklace = Some(k);
                }
                None => self.necklace = Some(k),
            },
        }
        self.other_necklaces.sort_unstable_by(|a, b| b.cmp(a));
    }
}

/// The factorization
/// `a^{8n} b (a^2 b^2 a^-2)(a^4 b^2 a^-4) ... (a^{4n-2} b^2 a^-(4n-2)) (a^{4n} b a^-4n)`
/// of the identity, with its census `{I_8n, (2n-1) I_2, 2 fishtails}`.
pub fn canonical_factorization(n: u32) -> Result<(McgWord, FiberCensus)> {
    if n < 1 {
        return Err(Error::Domain("canonical factorization needs n >= 1".into()));
    }
    let n = i64::from(n);
    let a = |k: i64| McgWord::letter_power(TwistLetter::A, k);
    let b = |k: i64| McgWord::letter_power(TwistLetter::B, k);
    let mut word = a(8 * n).concat(&b(1));
    for j in 1..=(2 * n - 1) {
        word = word.concat(&a(2 * j)).concat(&b(2)).concat(&a(-2 * j));
    }
    word = word.concat(&a(4 * n)).concat(&b(1)).concat(&a(-4 * n));
    let census = FiberCensus {
        necklace: Some(8 * n as u64),
        other_necklaces: Vec::new(),
        i2_count: 2 * n as u64 - 1,
        fishtail_count: 2,
    };
    Ok((word, census))
}

/// One intermediate word of the scripted rewriting chain.
#[derive(Clone, Debug)]
pub struct ReplayStep {
    pub description: String,
    pub word: McgWord,
}

/// Rewrites `(ab)^{6n}` into the canonical factorization using only
/// `apply_braid`, `conjugate_move` and `cancel_pairs_within`, recording every
/// intermediate word.
///
/// Braid phase: with the word `a^j R tail`, where `R` is the maximal
/// alternating run starting with `b` after the `a`-prefix, rewrite the longest
/// prefix of `R` whose length is a multiple of three. Each rewrite turns it
/// into an alternating run starting with `a`, growing the prefix by one. The
/// phase ends at `a^{4n} b (a^2 b^2)^{2n-1} a^2 b`.
pub fn lemma_replay(n: u32) -> Result<Vec<ReplayStep>> {
    if n < 1 {
        return Err(Error::Domain("replay needs n >= 1".into()));
    }
    let ni = i64::from(n);
    let start = McgWord::new(vec![TwistLetter::A, TwistLetter::B]).power(6 * ni);
    let mut steps = vec![ReplayStep {
        description: format!("(ab)^{}", 6 * ni),
        word: start.clone(),
    }];
    let mut w = start;

    loop {
        let prefix = w
            .letters
            .iter()
            .take_while(|&&l| l == TwistLetter::A)
            .count();
        let run = alternating_run(&w.letters[prefix..]);
        if w.letters.get(prefix) != Some(&TwistLetter::B) || run < 3 {
            break;
        }
        for t in 0..run / 3 {
            let pos = prefix + 3 * t;
            w = apply_braid(&w, pos)?;
            steps.push(ReplayStep {
                description: format!("braid at {pos}"),
                word: w.clone(),
            });
        }
    }

    let a = |k: i64| McgWord::letter_power(TwistLetter::A, k);
    let b = |k: i64| McgWord::letter_power(TwistLetter::B, k);
    let expected = a(4 * ni)
        .concat(&b(1))
        .concat(&a(2).concat(&b(2)).power(2 * ni - 1))
        .concat(&a(2))
        .concat(&b(1));
    if w != expected {
        return Err(Error::Domain(format!("braid phase ended at {w}")));
    }

    // Insert a^-2j a^2j after the j-th b^2 block, and a^-4n a^4n at the end.
    let tail = w.len();
    w = conjugate_move(&w, tail, 0, &a(-4 * ni))?;
    steps.push(ReplayStep {
        description: format!("insert a^{} a^{} at {tail}", -4 * ni, 4 * ni),
        word: w.clone(),
    });
    for j in (1..=(2 * ni - 1)).rev() {
        let pos = (4 * ni + 1 + 4 * j) as usize;
        w = conjugate_move(&w, pos, 0, &a(-2 * j))?;
        steps.push(ReplayStep {
            description: format!("insert a^{} a^{} at {pos}", -2 * j, 2 * j),
            word: w.clone(),
        });
    }

    let whole = w.len();
    w = conjugate_move(&w, 0, whole, &a(4 * ni))?;
    steps.push(ReplayStep {
        description: format!("conjugate by a^{}", 4 * ni),
        word: w.clone(),
    });

    let k = (8 * ni) as usize;
    let pos = w.len() - k;
    w = cancel_pairs_within(&w, pos, k)?;
    steps.push(ReplayStep {
        description: format!("cancel a^{} a^{} at the end", 4 * ni, -4 * ni),
        word: w,
    });
    Ok(steps)
}

fn alternating_run(letters: &[TwistLetter]) -> usize {
    if letters.is_empty() {
        return 0;
    }
    1 + letters
        .windows(2)
        .take_while(|p| p[0] != p[1] && !p[0].inverse && !p[1].inverse)
        .count()
}

/// Syntactic census of a word made of blocks `x^k` (positive `x`) and
/// conjugated blocks `c x^k c^-1`.
///
/// At each position the shortest conjugator `c` that closes a block wins;
/// otherwise the maximal run of one positive letter is taken. `k = 1` is a
/// fishtail, `k = 2` a double node, larger `k` a necklace.
pub fn classify_fibers(w: &McgWord) -> Result<FiberCensus> {
    let letters = &w.letters;
    let mut census = FiberCensus::default();
    let mut i = 0;
    while i < letters.len() {
        if let Some((k, next)) = match_conjugated(letters, i) {
            census.record(k as u64);
            i = next;
            continue;
        }
        let l = letters[i];
        if l.inverse {
            return Err(Error::Unclassifiable {
                position: i,
                reason: format!("negative letter {} outside a conjugator", l.as_char()),
            });
        }
        let k = letters[i..].iter().take_while(|&&x| x == l).count();
        census.record(k as u64);
        i += k;
    }
    Ok(census)
}

fn match_conjugated(letters: &[TwistLetter], i: usize) -> Option<(usize, usize)> {
    for c_len in 1..letters.len() - i {
        let j = i + c_len;
        let x = letters[j];
        if x.inverse || letters[j - 1] == x {
            continue;
        }
        let k = letters[j..].iter().take_while(|&&y| y == x).count();
        let close = j + k;
        if close + c_len > letters.len() {
            continue;
        }
        let conj = &letters[i..j];
        let matches = conj
            .iter()
            .rev()
            .zip(&letters[close..close + c_len])
            .all(|(c, d)| c.inverted() == *d);
        if matches {
            return Some((k, close + c_len));
        }
    }
    None
}

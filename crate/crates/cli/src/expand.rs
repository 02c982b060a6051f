//! Symbolic printing of the recovery identities.

use clap::ValueEnum;
use serde::Serialize;

use polarization::polarize::{masks_of_size, SignPattern, SubsetMask};

use crate::CliError;

pub const MAX_EXPAND_ORDER: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Style {
    /// `n! u = sum_J (-1)^{n-|J|} u~(S_J)`.
    Subset,
    /// The same with every argument shifted by `x0`.
    Offset,
    /// `2^n n! u = sum_eps (-1)^{|eps|} u~(+-x1 +- ... +- xn)`.
    Signed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Term {
    pub sign: i8,
    /// 1-based positions whose vector enters the argument (negated ones for
    /// the signed style).
    pub positions: Vec<usize>,
    pub argument: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Expansion {
    pub n: usize,
    pub style: Style,
    pub lhs: String,
    pub terms: Vec<Term>,
    pub text: String,
}

fn superscript(n: usize) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string().chars().map(|c| DIGITS[c.to_digit(10).unwrap() as usize]).collect()
}

fn parity_sign(k: usize) -> i8 {
    if k % 2 == 1 {
        -1
    } else {
        1
    }
}

fn sum_of(mask: SubsetMask, prefix: Option<&str>) -> String {
    let mut parts: Vec<String> = prefix.into_iter().map(str::to_string).collect();
    parts.extend(mask.members().map(|i| format!("x{}", i + 1)));
    parts.join("+")
}

fn signed_sum(pattern: &SignPattern) -> String {
    let mut out = String::new();
    for (i, &e) in pattern.eps().iter().enumerate() {
        match (e, i) {
            (1, _) => out.push('−'),
            (_, 0) => {}
            _ => out.push('+'),
        }
        out.push_str(&format!("x{}", i + 1));
    }
    out
}

/// Terms grouped by `k = |J|` from `n` down, masks ascending within a group;
/// the signed style runs over sign patterns in ascending mask order.
pub fn expansion(n: usize, style: Style) -> Result<Expansion, CliError> {
    if n == 0 || n > MAX_EXPAND_ORDER {
        return Err(CliError::Usage(format!("expand needs 1 <= n <= {MAX_EXPAND_ORDER}, got {n}")));
    }
    let args: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let u = format!("u({})", args.join(","));
    let (lhs, terms) = match style {
        Style::Subset | Style::Offset => {
            let lowest = if style == Style::Subset { 1 } else { 0 };
            let prefix = (style == Style::Offset).then_some("x0");
            let mut terms = Vec::new();
            for k in (lowest..=n).rev() {
                for mask in masks_of_size(n, k) {
                    terms.push(Term {
                        sign: parity_sign(n - k),
                        positions: mask.members().map(|i| i + 1).collect(),
                        argument: sum_of(mask, prefix),
                    });
                }
            }
            (format!("{n}! {u}"), terms)
        }
        Style::Signed => {
            let terms = (0..1u64 << n)
                .map(|m| {
                    let mask = SubsetMask(m);
                    let pattern = SignPattern::from_mask(mask, n);
                    Term {
                        sign: parity_sign(pattern.weight()),
                        positions: mask.members().map(|i| i + 1).collect(),
                        argument: signed_sum(&pattern),
                    }
                })
                .collect();
            (format!("2{}·{n}! {u}", superscript(n)), terms)
        }
    };
    let mut text = format!("{lhs} =");
    for (i, t) in terms.iter().enumerate() {
        let sign = match (i, t.sign) {
            (0, 1) => " ",
            (0, _) => " −",
            (_, 1) => " + ",
            _ => " − ",
        };
        text.push_str(&format!("{sign}ũ({})", t.argument));
    }
    Ok(Expansion { n, style, lhs, terms, text })
}

pub fn cmd_expand(n: usize, style: Style, json: bool) -> Result<String, CliError> {
    let e = expansion(n, style)?;
    Ok(if json { crate::to_json(&e) } else { format!("{}\n", e.text) })
}

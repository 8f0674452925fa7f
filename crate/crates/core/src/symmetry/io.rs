//! Text form of group presentations.
//!
//! ```text
//! symips group v1
//! order 6
//! gen x[1] -> x[2], x[2] -> x[1]
//! gen index-perm x@0 (1 2 3)
//! gen index-perm x@0 (1 2); index-perm y@0 (1 2)
//! ```
//!
//! A generator moves only the listed variables and fixes the rest of the
//! support supplied when loading (normally the instance variables).
//! `index-perm ns@pos (cycles)` permutes index position `pos` (default 0) of
//! every support variable in namespace `ns`; parts joined by `;` compose.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use super::group::{GroupPresentation, VariablePermutation};
use crate::algebra::{parse_variable, Variable};
use crate::error::{Error, Result};
use crate::textfile::{expect_header, header, keyword};

fn parse_cycles(line: usize, s: &str) -> Result<BTreeMap<i64, i64>> {
    let mut map = BTreeMap::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        let open = rest
            .strip_prefix('(')
            .ok_or_else(|| Error::parse(line, format!("expected '(' in cycle notation '{s}'")))?;
        let close = open
            .find(')')
            .ok_or_else(|| Error::parse(line, "unterminated cycle"))?;
        let items: Vec<i64> = open[..close]
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse()
                    .map_err(|_| Error::parse(line, format!("bad cycle entry '{t}'")))
            })
            .collect::<Result<_>>()?;
        for (k, &a) in items.iter().enumerate() {
            let b = items[(k + 1) % items.len()];
            if map.insert(a, b).is_some() {
                return Err(Error::parse(line, format!("{a} appears twice in cycles")));
            }
        }
        rest = open[close + 1..].trim_start();
    }
    Ok(map)
}

/// Splits on commas outside brackets.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, ch) in s.char_indices() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

fn parse_generator(
    line: usize,
    body: &str,
    support: &BTreeSet<Variable>,
) -> Result<VariablePermutation> {
    let mut acc = VariablePermutation::identity(support);
    for part in body.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let perm = if let Some(spec) = part.strip_prefix("index-perm") {
            let spec = spec.trim();
            let (target, cycles) = spec.split_at(spec.find('(').unwrap_or(spec.len()));
            let target = target.trim();
            let (ns, pos) = match target.split_once('@') {
                Some((ns, p)) => (
                    ns,
                    p.parse::<usize>()
                        .map_err(|_| Error::parse(line, format!("bad index position '{p}'")))?,
                ),
                None => (target, 0),
            };
            let cyc = parse_cycles(line, cycles)?;
            VariablePermutation::index_perm(support, ns, pos, &|i| *cyc.get(&i).unwrap_or(&i))
                .map_err(|e| Error::parse(line, e.to_string()))?
        } else {
            let mut moves = Vec::new();
            for pair in split_top_level(part).into_iter().filter(|p| !p.is_empty()) {
                let (a, b) = pair.split_once("->").ok_or_else(|| {
                    Error::parse(line, format!("expected 'a -> b', found '{pair}'"))
                })?;
                let a = parse_variable(a.trim()).map_err(|e| Error::parse(line, e.to_string()))?;
                let b = parse_variable(b.trim()).map_err(|e| Error::parse(line, e.to_string()))?;
                moves.push((a, b));
            }
            VariablePermutation::from_moves(support, moves)
                .map_err(|e| Error::parse(line, e.to_string()))?
        };
        acc = perm.compose(&acc);
    }
    Ok(acc)
}

pub fn parse_group(text: &str, support: &BTreeSet<Variable>) -> Result<GroupPresentation> {
    let lines = expect_header(text, "group")?;
    parse_group_lines(&lines, support)
}

/// Parses `gen` and `order` lines (without a header).
pub(crate) fn parse_group_lines(
    lines: &[(usize, &str)],
    support: &BTreeSet<Variable>,
) -> Result<GroupPresentation> {
    let mut gens = Vec::new();
    let mut order = None;
    for &(ln, line) in lines {
        match keyword(line) {
            ("gen", body) => gens.push(parse_generator(ln, body, support)?),
            ("order", body) => {
                order = Some(
                    body.parse::<u64>()
                        .map_err(|_| Error::parse(ln, format!("bad order '{body}'")))?,
                )
            }
            (kw, _) => return Err(Error::parse(ln, format!("unknown keyword '{kw}'"))),
        }
    }
    let mut g = GroupPresentation::new(gens);
    g.order_hint = order;
    Ok(g)
}

pub fn write_group(g: &GroupPresentation) -> String {
    let mut out = header("group");
    out.push('\n');
    write_group_lines(g, &mut out);
    out
}

pub(crate) fn write_group_lines(g: &GroupPresentation, out: &mut String) {
    if let Some(o) = g.order_hint {
        let _ = writeln!(out, "order {o}");
    }
    for gen in &g.generators {
        let _ = writeln!(out, "gen {gen}");
    }
}

//! Line-oriented input files. Three kinds are accepted:
//!
//! ```text
//! kind signed_poset          kind graph            kind poset
//! dim 4                      dim 3                 dim 2
//! root +1 +2                 edge 1 2              cover 1 2
//! root -3 +4                 edge 2 3
//! root +1
//! forest e1 e3
//! epsilon e2 e4
//! walk 1: e2 v1 e1 v2 e3
//! ```
//!
//! `#` starts a comment. Signed vertex indices are 1-based; `+i` puts a
//! positive coordinate at vertex i, `-i` a negative one. The optional
//! `forest`, `epsilon`, and `walk` directives pin the choices used by the
//! weight computation; all indices in them are 1-based and may carry their
//! `e`/`v` prefixes.

use std::collections::{BTreeMap, BTreeSet};

use signed_toric::balanced::hibi;
use signed_toric::graph::{Sign, Walk};
use signed_toric::poset::{graph_poset, Root, SignedPoset};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    SignedPoset,
    Graph,
    Poset,
}

/// A parsed input file: the poset itself plus the optional choices for the
/// weight basis.
#[derive(Debug)]
pub struct InputDocument {
    pub poset: SignedPoset,
    pub forest: Option<Vec<usize>>,
    pub epsilons: Option<Vec<usize>>,
    pub walks: Option<Vec<Walk>>,
}

fn signed_vertex(line: usize, dim: usize, token: &str) -> Result<(usize, Sign), CliError> {
    let value: i64 = token.parse().map_err(|_| {
        CliError::parse(line, format!("expected a signed vertex index, got `{token}`"))
    })?;
    if value == 0 {
        return Err(CliError::parse(line, "vertices are numbered from 1"));
    }
    let index = value.unsigned_abs() as usize;
    if index > dim {
        return Err(CliError::parse(
            line,
            format!("vertex {index} is out of range for dimension {dim}"),
        ));
    }
    let sign = if value > 0 { Sign::Plus } else { Sign::Minus };
    Ok((index - 1, sign))
}

fn plain_index(
    line: usize,
    upper: usize,
    token: &str,
    prefix: char,
    what: &str,
) -> Result<usize, CliError> {
    let digits = token.strip_prefix(prefix).unwrap_or(token);
    let value: usize = digits
        .parse()
        .ok()
        .filter(|&v| v >= 1)
        .ok_or_else(|| CliError::parse(line, format!("expected a {what} index, got `{token}`")))?;
    if value > upper {
        return Err(CliError::parse(
            line,
            format!("{what} {value} is out of range (there are {upper})"),
        ));
    }
    Ok(value - 1)
}

/// One raw directive with its line number, collected in file order.
struct RawLine<'a> {
    number: usize,
    tokens: Vec<&'a str>,
}

pub fn parse(text: &str) -> Result<InputDocument, CliError> {
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = body.split_whitespace().collect();
        if !tokens.is_empty() {
            lines.push(RawLine { number: i + 1, tokens });
        }
    }

    let mut kind: Option<Kind> = None;
    let mut dim: Option<usize> = None;
    let mut roots: Vec<Root> = Vec::new();
    // Canonical (sign-normalized) vector -> exact vector, to tell duplicate
    // roots apart from antisymmetry violations at the offending line.
    let mut seen_roots: BTreeMap<Vec<i64>, Vec<i64>> = BTreeMap::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut covers: Vec<(usize, usize)> = Vec::new();
    let mut forest: Option<(usize, Vec<&str>)> = None;
    let mut epsilon: Option<(usize, Vec<&str>)> = None;
    let mut walks: BTreeMap<usize, (usize, Vec<String>)> = BTreeMap::new();

    for line in &lines {
        let RawLine { number, tokens } = line;
        let number = *number;
        let directive = tokens[0];
        let args = &tokens[1..];
        if kind.is_none() && directive != "kind" {
            return Err(CliError::parse(number, "the first directive must be `kind`"));
        }
        if directive != "kind" && directive != "dim" && dim.is_none() {
            return Err(CliError::parse(number, "declare `dim` before any content"));
        }
        match directive {
            "kind" => {
                if kind.is_some() {
                    return Err(CliError::parse(number, "`kind` is declared twice"));
                }
                let value = match args {
                    [v] => *v,
                    _ => return Err(CliError::parse(number, "usage: kind <signed_poset|graph|poset>")),
                };
                kind = Some(match value {
                    "signed_poset" => Kind::SignedPoset,
                    "graph" => Kind::Graph,
                    "poset" => Kind::Poset,
                    other => {
                        return Err(CliError::parse(
                            number,
                            format!("unknown kind `{other}` (expected signed_poset, graph, or poset)"),
                        ))
                    }
                });
            }
            "dim" => {
                if dim.is_some() {
                    return Err(CliError::parse(number, "`dim` is declared twice"));
                }
                let value = match args {
                    [v] => v.parse::<usize>().ok().filter(|&d| d >= 1),
                    _ => None,
                };
                dim = Some(value.ok_or_else(|| {
                    CliError::parse(number, "usage: dim <positive integer>")
                })?);
            }
            "root" => {
                if kind != Some(Kind::SignedPoset) {
                    return Err(CliError::parse(number, "`root` lines need kind signed_poset"));
                }
                let d = dim.unwrap();
                let root = match args {
                    [a] => {
                        let (v, sign) = signed_vertex(number, d, a)?;
                        Root::short(v, sign)
                    }
                    [a, b] => {
                        let (u, su) = signed_vertex(number, d, a)?;
                        let (v, sv) = signed_vertex(number, d, b)?;
                        if u == v {
                            return Err(CliError::parse(
                                number,
                                format!("loop at vertex {}", u + 1),
                            ));
                        }
                        Root::long(u, su, v, sv).map_err(|e| CliError::parse(number, e.to_string()))?
                    }
                    _ => {
                        return Err(CliError::parse(
                            number,
                            "usage: root <±i> or root <±i> <±j>",
                        ))
                    }
                };
                let exact: Vec<i64> = root
                    .to_vector(d)
                    .iter()
                    .map(|x| i64::try_from(x).expect("root coordinates are units"))
                    .collect();
                let mut canonical = exact.clone();
                if canonical.iter().find(|&&x| x != 0).is_some_and(|&lead| lead < 0) {
                    for x in &mut canonical {
                        *x = -*x;
                    }
                }
                match seen_roots.get(&canonical) {
                    Some(previous) if *previous == exact => {
                        return Err(CliError::parse(number, format!("root {root} is listed twice")))
                    }
                    Some(_) => {
                        return Err(CliError::parse(
                            number,
                            format!("root {root} is the negation of an earlier root"),
                        ))
                    }
                    None => {
                        seen_roots.insert(canonical, exact);
                    }
                }
                roots.push(root);
            }
            "edge" => {
                if kind != Some(Kind::Graph) {
                    return Err(CliError::parse(number, "`edge` lines need kind graph"));
                }
                let d = dim.unwrap();
                let (u, v) = match args {
                    [a, b] => (
                        plain_index(number, d, a, 'v', "vertex")?,
                        plain_index(number, d, b, 'v', "vertex")?,
                    ),
                    _ => return Err(CliError::parse(number, "usage: edge <u> <v>")),
                };
                if u == v {
                    return Err(CliError::parse(number, format!("loop at vertex {}", u + 1)));
                }
                let key = (u.min(v), u.max(v));
                if edges.iter().any(|&(a, b)| (a.min(b), a.max(b)) == key) {
                    return Err(CliError::parse(
                        number,
                        format!("edge {} {} is listed twice", key.0 + 1, key.1 + 1),
                    ));
                }
                edges.push((u, v));
            }
            "cover" => {
                if kind != Some(Kind::Poset) {
                    return Err(CliError::parse(number, "`cover` lines need kind poset"));
                }
                let d = dim.unwrap();
                let (i, j) = match args {
                    [a, b] => (
                        plain_index(number, d, a, 'p', "element")?,
                        plain_index(number, d, b, 'p', "element")?,
                    ),
                    _ => return Err(CliError::parse(number, "usage: cover <i> <j>")),
                };
                if i == j {
                    return Err(CliError::parse(
                        number,
                        format!("element {} cannot cover itself", i + 1),
                    ));
                }
                if covers.contains(&(i, j)) {
                    return Err(CliError::parse(
                        number,
                        format!("cover {} {} is listed twice", i + 1, j + 1),
                    ));
                }
                covers.push((i, j));
            }
            "forest" => {
                if forest.is_some() {
                    return Err(CliError::parse(number, "`forest` is declared twice"));
                }
                forest = Some((number, args.to_vec()));
            }
            "epsilon" => {
                if epsilon.is_some() {
                    return Err(CliError::parse(number, "`epsilon` is declared twice"));
                }
                epsilon = Some((number, args.to_vec()));
            }
            "walk" => {
                let index_token = args
                    .first()
                    .ok_or_else(|| CliError::parse(number, "usage: walk <k>: e... v... e..."))?;
                let digits = index_token.strip_suffix(':').unwrap_or(index_token);
                let index = digits.parse::<usize>().ok().filter(|&k| k >= 1).ok_or_else(|| {
                    CliError::parse(number, format!("expected a walk number, got `{index_token}`"))
                })?;
                if walks.contains_key(&index) {
                    return Err(CliError::parse(number, format!("walk {index} is declared twice")));
                }
                let body: Vec<String> = args[1..].iter().map(|s| s.to_string()).collect();
                walks.insert(index, (number, body));
            }
            other => {
                return Err(CliError::parse(number, format!("unknown directive `{other}`")));
            }
        }
    }

    let kind = kind.ok_or_else(|| CliError::parse(1, "empty input; the first directive must be `kind`"))?;
    let dim = dim.ok_or_else(|| CliError::parse(1, "missing `dim` directive"))?;

    let poset = match kind {
        Kind::SignedPoset => {
            SignedPoset::new(dim, roots).map_err(|e| CliError::validation(e.to_string()))?
        }
        Kind::Graph => {
            graph_poset(dim, &edges).map_err(|e| CliError::validation(e.to_string()))?
        }
        Kind::Poset => hibi(dim, &covers).map_err(|e| CliError::validation(e.to_string()))?,
    };

    // Reports index edges by position in the generator list, so redundant
    // generators would silently shift every label; reject them up front.
    let extremal: BTreeSet<usize> = poset.extremal_indices().into_iter().collect();
    if extremal.len() != poset.len() {
        let culprit = (0..poset.len()).find(|i| !extremal.contains(i)).unwrap();
        return Err(CliError::validation(format!(
            "root e{} ({}) is a nonnegative combination of the others; list extremal generators only",
            culprit + 1,
            poset.roots()[culprit]
        )));
    }

    let n = poset.len();
    let parse_edge_list = |(number, tokens): &(usize, Vec<&str>)| -> Result<Vec<usize>, CliError> {
        let mut out = Vec::with_capacity(tokens.len());
        for token in tokens {
            let e = plain_index(*number, n, token, 'e', "edge")?;
            if out.contains(&e) {
                return Err(CliError::parse(*number, format!("edge e{} is listed twice", e + 1)));
            }
            out.push(e);
        }
        Ok(out)
    };
    let forest = forest.as_ref().map(&parse_edge_list).transpose()?;
    let epsilons = epsilon.as_ref().map(&parse_edge_list).transpose()?;

    let walks = if walks.is_empty() {
        None
    } else {
        let count = walks.len();
        let mut ordered = Vec::with_capacity(count);
        for want in 1..=count {
            let (number, tokens) = walks.get(&want).ok_or_else(|| {
                let (&first, _) = walks.iter().next().unwrap();
                CliError::parse(
                    walks[&first].0,
                    format!("walk numbers must run 1..={count} without gaps"),
                )
            })?;
            if tokens.is_empty() || tokens.len() % 2 == 0 {
                return Err(CliError::parse(
                    *number,
                    "a walk alternates edges and vertices, starting and ending with an edge",
                ));
            }
            let mut walk = Walk { edges: Vec::new(), vertices: Vec::new() };
            for (i, token) in tokens.iter().enumerate() {
                if i % 2 == 0 {
                    walk.edges.push(plain_index(*number, n, token, 'e', "edge")?);
                } else {
                    walk.vertices.push(plain_index(*number, poset.dim(), token, 'v', "vertex")?);
                }
            }
            ordered.push(walk);
        }
        Some(ordered)
    };

    Ok(InputDocument { poset, forest, epsilons, walks })
}

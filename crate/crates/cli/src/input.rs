//! Resolution of the digraph named on the command line: either a family
//! name with parameter flags or a text-format file via `--in`, never both.

use std::path::PathBuf;

use anyhow::{anyhow, bail, Result};
use clap::Args;
use wdrd_core::families::{
    cayley, complete_graph, hamming_lines, paley_tournament, shrikhande, CayleySpec,
};
use wdrd_core::{BaseFamily, Digraph, Q2BaseKind};

use crate::format::read_digraph_file;

/// Parameter flags shared by every family-accepting subcommand.
#[derive(Args, Clone, Debug, Default)]
pub struct FamilyParams {
    /// Number of coordinates (hamming)
    #[arg(long)]
    pub d: Option<usize>,
    /// Alphabet size (hamming, complete, paley)
    #[arg(long)]
    pub q: Option<usize>,
    /// Cube dimension (folded_cube)
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of Shrikhande factors (doob)
    #[arg(long)]
    pub d1: Option<usize>,
    /// Number of complete-graph factors (doob)
    #[arg(long)]
    pub d2: Option<usize>,
    /// Cyclic group moduli, e.g. `4,2` (cayley)
    #[arg(long)]
    pub moduli: Option<String>,
    /// Connection set, e.g. `(1,0),(0,1)` or `1,5`; entries are reduced
    /// modulo the group (cayley)
    #[arg(long)]
    pub conn: Option<String>,
}

/// A digraph plus everything the search verb can infer about it: a stable
/// label for reports and the pruning metadata available for the family.
#[derive(Debug)]
pub struct ResolvedInput {
    pub digraph: Digraph,
    pub label: String,
    pub q2: Option<Q2BaseKind>,
    pub lines: Option<Vec<Vec<usize>>>,
}

impl ResolvedInput {
    fn plain(digraph: Digraph, label: String) -> Self {
        ResolvedInput {
            digraph,
            label,
            q2: None,
            lines: None,
        }
    }
}

fn require(value: Option<usize>, flag: &str, family: &str) -> Result<usize> {
    value.ok_or_else(|| anyhow!("family `{family}` needs {flag}"))
}

fn require_str<'a>(value: &'a Option<String>, flag: &str, family: &str) -> Result<&'a str> {
    value
        .as_deref()
        .ok_or_else(|| anyhow!("family `{family}` needs {flag}"))
}

pub fn parse_moduli(s: &str) -> Result<Vec<u32>> {
    s.split(',')
        .map(|part| {
            let part = part.trim();
            part.parse()
                .map_err(|_| anyhow!("bad modulus `{part}` in `{s}`"))
        })
        .collect()
}

/// Splits a connection-set string into integer tuples: parenthesized groups
/// are tuples, bare integers are 1-tuples, top-level commas separate
/// entries.
pub fn parse_connection(s: &str) -> Result<Vec<Vec<i64>>> {
    let mut entries: Vec<Vec<i64>> = Vec::new();
    let mut current = String::new();
    let mut depth = 0u32;
    let mut flush = |current: &mut String| -> Result<()> {
        let text = current.trim();
        if text.is_empty() {
            bail!("empty entry in connection set `{s}`");
        }
        let tuple = text
            .split(',')
            .map(|field| {
                let field = field.trim();
                field
                    .parse()
                    .map_err(|_| anyhow!("bad integer `{field}` in connection set `{s}`"))
            })
            .collect::<Result<Vec<i64>>>()?;
        entries.push(tuple);
        current.clear();
        Ok(())
    };
    for ch in s.chars() {
        match ch {
            '(' => {
                if depth > 0 {
                    bail!("nested `(` in connection set `{s}`");
                }
                depth += 1;
            }
            ')' => {
                if depth == 0 {
                    bail!("unbalanced `)` in connection set `{s}`");
                }
                depth -= 1;
            }
            ',' if depth == 0 => flush(&mut current)?,
            _ => current.push(ch),
        }
    }
    if depth != 0 {
        bail!("unbalanced `(` in connection set `{s}`");
    }
    flush(&mut current)?;
    Ok(entries)
}

fn cayley_label(spec: &CayleySpec) -> String {
    let group = spec
        .moduli()
        .iter()
        .map(|m| format!("Z{m}"))
        .collect::<Vec<_>>()
        .join("x");
    let entries = spec
        .connection()
        .iter()
        .map(|tuple| {
            if tuple.len() == 1 {
                tuple[0].to_string()
            } else {
                let fields = tuple
                    .iter()
                    .map(|t| t.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                format!("({fields})")
            }
        })
        .collect::<Vec<_>>()
        .join(",");
    format!("cayley({group}, {{{entries}}})")
}

/// Builds the named family from its flags.
pub fn resolve_family(name: &str, p: &FamilyParams) -> Result<ResolvedInput> {
    match name.replace('-', "_").as_str() {
        "hamming" => {
            let d = require(p.d, "--d", "hamming")?;
            let q = require(p.q, "--q", "hamming")?;
            let digraph = BaseFamily::Hamming { d, q }.build()?;
            let mut input = ResolvedInput::plain(digraph, format!("hamming({d},{q})"));
            if q == 2 {
                input.q2 = Some(Q2BaseKind::Cube);
            } else {
                input.lines = Some(hamming_lines(d, q));
            }
            Ok(input)
        }
        "folded_cube" => {
            let n = require(p.n, "--n", "folded_cube")?;
            let digraph = BaseFamily::FoldedCube { n }.build()?;
            let mut input = ResolvedInput::plain(digraph, format!("folded_cube({n})"));
            input.q2 = Some(Q2BaseKind::FoldedCube);
            Ok(input)
        }
        "doob" => {
            let d1 = require(p.d1, "--d1", "doob")?;
            let d2 = require(p.d2, "--d2", "doob")?;
            let digraph = BaseFamily::Doob { d1, d2 }.build()?;
            Ok(ResolvedInput::plain(digraph, format!("doob({d1},{d2})")))
        }
        "complete" => {
            let q = require(p.q, "--q", "complete")?;
            if q == 0 {
                bail!("family `complete` needs --q >= 1");
            }
            let mut input =
                ResolvedInput::plain(complete_graph(q), format!("complete({q})"));
            if q >= 3 {
                input.lines = Some(vec![(0..q).collect()]);
            }
            Ok(input)
        }
        "cayley" => {
            let moduli = parse_moduli(require_str(&p.moduli, "--moduli", "cayley")?)?;
            let conn = parse_connection(require_str(&p.conn, "--conn", "cayley")?)?;
            let spec = CayleySpec::new(&moduli, &conn)?;
            let label = cayley_label(&spec);
            Ok(ResolvedInput::plain(cayley(&spec), label))
        }
        "paley" => {
            let q = require(p.q, "--q", "paley")?;
            Ok(ResolvedInput::plain(paley_tournament(q)?, format!("paley({q})")))
        }
        "shrikhande" => Ok(ResolvedInput::plain(shrikhande(), "shrikhande".into())),
        other => bail!(
            "unknown family `{other}`; known: hamming, folded_cube, doob, complete, cayley, \
             paley, shrikhande"
        ),
    }
}

/// Resolves a family-or-file input, enforcing that exactly one was given.
pub fn resolve_input(
    family: Option<&str>,
    params: &FamilyParams,
    path: Option<&PathBuf>,
) -> Result<ResolvedInput> {
    match (family, path) {
        (Some(_), Some(_)) => bail!("give a named family or --in, not both"),
        (Some(name), None) => resolve_family(name, params),
        (None, Some(path)) => {
            let digraph = read_digraph_file(path)?;
            Ok(ResolvedInput::plain(digraph, path.display().to_string()))
        }
        (None, None) => bail!("need a named family or --in FILE"),
    }
}

/// The base families the theorem driver knows how to verify.
pub fn parse_base_family(name: &str, p: &FamilyParams) -> Result<(BaseFamily, String)> {
    match name.replace('-', "_").as_str() {
        "hamming" => {
            let d = require(p.d, "--d", "hamming")?;
            let q = require(p.q, "--q", "hamming")?;
            Ok((BaseFamily::Hamming { d, q }, format!("hamming({d},{q})")))
        }
        "folded_cube" => {
            let n = require(p.n, "--n", "folded_cube")?;
            Ok((BaseFamily::FoldedCube { n }, format!("folded_cube({n})")))
        }
        "doob" => {
            let d1 = require(p.d1, "--d1", "doob")?;
            let d2 = require(p.d2, "--d2", "doob")?;
            Ok((BaseFamily::Doob { d1, d2 }, format!("doob({d1},{d2})")))
        }
        other => bail!("unknown base family `{other}`; known: hamming, folded_cube, doob"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn connection_strings() {
        assert_eq!(parse_connection("1,5").unwrap(), vec![vec![1], vec![5]]);
        assert_eq!(
            parse_connection("(1,0),(0,1),(-1,-1)").unwrap(),
            vec![vec![1, 0], vec![0, 1], vec![-1, -1]]
        );
        assert_eq!(parse_connection(" ( 1 , 0 ) ").unwrap(), vec![vec![1, 0]]);
        for bad in ["", "1,,2", "(1,0", "1)", "((1))", "(a,b)"] {
            assert!(parse_connection(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn family_metadata() {
        let p = FamilyParams {
            d: Some(2),
            q: Some(2),
            ..Default::default()
        };
        let r = resolve_family("hamming", &p).unwrap();
        assert_eq!(r.label, "hamming(2,2)");
        assert!(matches!(r.q2, Some(Q2BaseKind::Cube)));
        assert!(r.lines.is_none());

        let p = FamilyParams {
            d: Some(2),
            q: Some(3),
            ..Default::default()
        };
        let r = resolve_family("hamming", &p).unwrap();
        assert_eq!(r.lines.as_ref().map(Vec::len), Some(6));

        let p = FamilyParams {
            moduli: Some("8".into()),
            conn: Some("1,5".into()),
            ..Default::default()
        };
        let r = resolve_family("cayley", &p).unwrap();
        assert_eq!(r.label, "cayley(Z8, {1,5})");
        assert_eq!(r.digraph.vertex_count(), 8);
    }

    #[test]
    fn missing_flags_are_usage_errors() {
        let err = resolve_family("hamming", &FamilyParams::default()).unwrap_err();
        assert!(err.to_string().contains("needs --d"));
        let err = resolve_family("nosuch", &FamilyParams::default()).unwrap_err();
        assert!(err.to_string().contains("unknown family"));
        let err = resolve_input(None, &FamilyParams::default(), None).unwrap_err();
        assert!(err.to_string().contains("need a named family or --in"));
    }
}

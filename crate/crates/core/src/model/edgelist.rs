//! Plain-text edge lists: a header line `n <n>` followed by one `i j` line
//! per edge, 1-based, `i < j`, sorted lexicographically.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::graph::Graph;

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::with_capacity(8 + 8 * g.edge_count());
    writeln!(out, "n {}", g.n()).unwrap();
    for (i, j) in g.edges() {
        writeln!(out, "{} {}", i + 1, j + 1).unwrap();
    }
    out
}

fn parse_usize(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    let tok = tok.ok_or_else(|| Error::Parse {
        line,
        msg: format!("missing {what}"),
    })?;
    tok.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("{what} {tok:?} is not a non-negative integer"),
    })
}

/// Strict inverse of [`write_edge_list`]: anything the writer would not
/// produce is rejected.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text.lines().enumerate().map(|(k, l)| (k + 1, l));
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty input".into(),
    })?;
    let mut toks = header.split(' ');
    if toks.next() != Some("n") {
        return Err(Error::Parse {
            line: 1,
            msg: "header must be `n <count>`".into(),
        });
    }
    let n = parse_usize(toks.next(), 1, "vertex count")?;
    if toks.next().is_some() {
        return Err(Error::Parse {
            line: 1,
            msg: "trailing tokens in header".into(),
        });
    }

    let mut edges: Vec<(u32, u32)> = Vec::new();
    for (line, l) in lines {
        let mut toks = l.split(' ');
        let i = parse_usize(toks.next(), line, "endpoint")?;
        let j = parse_usize(toks.next(), line, "endpoint")?;
        if toks.next().is_some() {
            return Err(Error::Parse {
                line,
                msg: "expected exactly two endpoints".into(),
            });
        }
        if !(1 <= i && i < j && j <= n) {
            return Err(Error::Parse {
                line,
                msg: format!("edge {i} {j} must satisfy 1 <= i < j <= {n}"),
            });
        }
        let e = ((i - 1) as u32, (j - 1) as u32);
        if let Some(&prev) = edges.last() {
            if prev >= e {
                return Err(Error::Parse {
                    line,
                    msg: "edges must be strictly increasing".into(),
                });
            }
        }
        edges.push(e);
    }
    if !text.is_empty() && !text.ends_with('\n') {
        return Err(Error::Parse {
            line: text.lines().count(),
            msg: "missing final newline".into(),
        });
    }
    Ok(Graph::from_sorted_unchecked(n, edges))
}

pub fn read_edge_list(path: &Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_edge_list(&text)
}

pub fn save_edge_list(path: &Path, g: &Graph) -> Result<()> {
    std::fs::write(path, write_edge_list(g)).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn writes_expected_text() {
        let g = Graph::from_edges(4, [(2, 3), (0, 1)]).unwrap();
        assert_eq!(write_edge_list(&g), "n 4\n1 2\n3 4\n");
        assert_eq!(write_edge_list(&Graph::empty(2)), "n 2\n");
    }

    #[test]
    fn rejects_non_canonical_input() {
        for bad in [
            "",
            "m 3\n",
            "n 3\n2 1\n",
            "n 3\n1 2\n1 2\n",
            "n 3\n1 3\n1 2\n",
            "n 3\n1 4\n",
            "n 3\n1 2 3\n",
            "n 3\n1  2\n",
            "n 3\n1 2",
            "n 3\nx 2\n",
        ] {
            assert!(parse_edge_list(bad).is_err(), "{bad:?} accepted");
        }
    }

    proptest! {
        #[test]
        fn parse_inverts_write(n in 1usize..20, bits in proptest::collection::vec(any::<bool>(), 190)) {
            let mut k = 0;
            let g = Graph::from_pair_predicate(n, |_, _| { k += 1; bits[k - 1] });
            let text = write_edge_list(&g);
            let back = parse_edge_list(&text).unwrap();
            prop_assert_eq!(&back, &g);
            prop_assert_eq!(write_edge_list(&back), text);
        }
    }
}

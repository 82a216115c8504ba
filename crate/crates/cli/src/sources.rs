//! `name:key=value,...` source specifications for codes and graphs.

use std::collections::BTreeMap;

use blocksmith::codes::{
    concatenate, extended_rs_generator, identity_generator, parity_generator, random_generator, simplex_generator,
    GeneratorMatrix, GeneratorMatrixFile,
};
use blocksmith::field::Field;
use blocksmith::graphs::{gnp_sample, lps_graph, random_regular, Graph, GraphFile};
use blocksmith::subfield::SubfieldEmbedding;

use crate::exit::{CliError, CliResult};

struct Spec {
    name: String,
    args: BTreeMap<String, String>,
    positional: Vec<String>,
}

fn parse(spec: &str) -> Spec {
    let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let mut args = BTreeMap::new();
    let mut positional = Vec::new();
    // file paths may contain commas only before the first key=value
    for part in rest.split(',').filter(|s| !s.is_empty()) {
        match part.split_once('=') {
            Some((k, v)) => {
                args.insert(k.trim().to_string(), v.trim().to_string());
            }
            None => positional.push(part.trim().to_string()),
        }
    }
    Spec {
        name: name.trim().to_string(),
        args,
        positional,
    }
}

impl Spec {
    fn num<T: std::str::FromStr>(&self, key: &str) -> CliResult<T> {
        let raw = self
            .args
            .get(key)
            .or_else(|| if self.args.is_empty() { self.positional.first() } else { None })
            .ok_or_else(|| CliError::usage(format!("{}: missing {key}", self.name)))?;
        raw.parse()
            .map_err(|_| CliError::usage(format!("{}: {key} = {raw:?} is not a number", self.name)))
    }

    fn opt_num<T: std::str::FromStr>(&self, key: &str) -> CliResult<Option<T>> {
        match self.args.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|_| CliError::usage(format!("{}: {key} = {raw:?} is not a number", self.name))),
        }
    }

    fn path(&self) -> CliResult<&str> {
        self.positional
            .first()
            .map(String::as_str)
            .ok_or_else(|| CliError::usage(format!("{}: missing path", self.name)))
    }
}

fn read(path: &str) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

/// Codes: `rs:q=,n=,k=` (n up to q + 1), `concat:q=,n=,k=,inner=parity|simplex[,base=]`,
/// `random:q=,k=,n=`, `simplex:q=,m=`, `parity:q=,m=`, `identity:q=,k=`,
/// `file:PATH[,q=]` (JSON, or whitespace text with `q`).
pub fn parse_code(spec: &str, seed: u64) -> CliResult<GeneratorMatrix> {
    let s = parse(spec);
    let field = |s: &Spec| -> CliResult<Field> { Ok(Field::of_order(s.num::<u64>("q")?)?) };
    Ok(match s.name.as_str() {
        "rs" => extended_rs_generator(&field(&s)?, s.num("n")?, s.num("k")?)?,
        "random" => random_generator(&field(&s)?, s.num("k")?, s.num("n")?, seed)?,
        "simplex" => simplex_generator(&field(&s)?, s.num("m")?)?,
        "parity" => parity_generator(&field(&s)?, s.num("m")?)?,
        "identity" => identity_generator(&field(&s)?, s.num("k")?)?,
        "concat" => {
            let big = field(&s)?;
            let base = s.opt_num::<u64>("base")?.unwrap_or(big.p() as u64);
            let small = Field::of_order(base)?;
            let emb = SubfieldEmbedding::new(&big, &small)?;
            let outer = extended_rs_generator(&big, s.num("n")?, s.num("k")?)?;
            let m = emb.degree();
            let inner = match s.args.get("inner").map(String::as_str).unwrap_or("parity") {
                "parity" => parity_generator(&small, m)?,
                "simplex" => simplex_generator(&small, m)?,
                other => return Err(CliError::usage(format!("concat: unknown inner code {other:?}"))),
            };
            concatenate(&outer, &inner, &emb)?
        }
        "file" => {
            let path = s.path()?;
            let text = read(path)?;
            if path.ends_with(".json") {
                let file: GeneratorMatrixFile =
                    serde_json::from_str(&text).map_err(|e| CliError::usage(format!("{path}: {e}")))?;
                GeneratorMatrix::from_file(&file)?
            } else {
                GeneratorMatrix::from_text(&field(&s)?, &text)?
            }
        }
        other => return Err(CliError::usage(format!("unknown code source {other:?}"))),
    })
}

/// Graphs: `cycle:N`, `path:N`, `complete:N`, `empty:N`, `petersen`,
/// `lps:p=,r=`, `regular:n=,d=`, `gnp:n=,p=`, `file:PATH` (JSON or edge list).
pub fn parse_graph(spec: &str, seed: u64) -> CliResult<Graph> {
    let s = parse(spec);
    Ok(match s.name.as_str() {
        "cycle" => Graph::cycle(s.num("n")?)?,
        "path" => Graph::path(s.num("n")?)?,
        "complete" => Graph::complete(s.num("n")?)?,
        "empty" => Graph::empty(s.num("n")?),
        "petersen" => Graph::petersen(),
        "lps" => lps_graph(s.num("p")?, s.num("r")?)?.graph,
        "regular" => random_regular(s.num("n")?, s.num("d")?, seed)?,
        "gnp" => gnp_sample(s.num("n")?, s.num("p")?, seed)?,
        "file" => {
            let path = s.path()?;
            let text = read(path)?;
            if path.ends_with(".json") {
                let file: GraphFile =
                    serde_json::from_str(&text).map_err(|e| CliError::usage(format!("{path}: {e}")))?;
                Graph::from_file(&file)?
            } else {
                Graph::from_edge_list(&text)?
            }
        }
        other => return Err(CliError::usage(format!("unknown graph source {other:?}"))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn specs() {
        let g = parse_code("rs:q=5,n=6,k=3", 0).unwrap();
        assert_eq!((g.n(), g.k()), (6, 3));
        assert_eq!(parse_graph("cycle:6", 0).unwrap().edge_count(), 6);
        assert_eq!(parse_graph("petersen", 0).unwrap().n(), 10);
        assert_eq!(parse_code("rs:q=5,n=6", 0).unwrap_err().exit_code, 1);
        assert_eq!(parse_graph("wheel:5", 0).unwrap_err().exit_code, 1);
        let c = parse_code("concat:q=4,n=4,k=2,inner=parity", 0).unwrap();
        assert_eq!((c.n(), c.k(), c.field().q()), (12, 4, 2));
    }
}

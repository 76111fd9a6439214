//! JSON interchange for games, hypergraphs, and set families. Rationals
//! travel as lowest-terms "a/b" strings; nothing is ever a float.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{FiniteGame, MixedStrategy};
use crate::hypergraph::Hypergraph;
use crate::rational::{format_rat, parse_rat, Rat};
use crate::setfam::SetFamily;

#[derive(Debug, Serialize, Deserialize)]
struct GameFile {
    rows: Vec<String>,
    cols: Vec<String>,
    payoff: Vec<Vec<String>>,
}

pub fn game_to_json(game: &FiniteGame) -> String {
    let file = GameFile {
        rows: game.row_labels().to_vec(),
        cols: game.col_labels().to_vec(),
        payoff: game
            .rows()
            .iter()
            .map(|row| row.iter().map(format_rat).collect())
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("game serializes")
}

pub fn game_from_json(text: &str) -> Result<FiniteGame> {
    let file: GameFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("game file: {e}")))?;
    let payoff = file
        .payoff
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, cell)| {
                    parse_rat(cell).map_err(|e| {
                        Error::Parse(format!("payoff[{}][{}]: {e}", i + 1, j + 1))
                    })
                })
                .collect::<Result<Vec<Rat>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    FiniteGame::new(file.rows, file.cols, payoff)
}

#[derive(Debug, Serialize, Deserialize)]
struct HypergraphFile {
    vertices: Vec<String>,
    edges: Vec<Vec<String>>,
}

pub fn hypergraph_to_json(h: &Hypergraph) -> String {
    let labels = h.vertex_labels();
    let file = HypergraphFile {
        vertices: labels.to_vec(),
        edges: h
            .edges()
            .iter()
            .map(|edge| edge.iter().map(|&v| labels[(v - 1) as usize].clone()).collect())
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("hypergraph serializes")
}

pub fn hypergraph_from_json(text: &str) -> Result<Hypergraph> {
    let file: HypergraphFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("hypergraph file: {e}")))?;
    Hypergraph::from_labels(file.vertices, file.edges)
}

#[derive(Debug, Serialize, Deserialize)]
struct FamilyFile {
    #[serde(default)]
    name: Option<String>,
    sets: Vec<Vec<u64>>,
    #[serde(default)]
    downward_closed: bool,
}

pub fn family_to_json(family: &SetFamily) -> Result<String> {
    let file = FamilyFile {
        name: Some(family.name()),
        sets: family
            .enumerate_members()?
            .into_iter()
            .map(|s| s.into_iter().collect())
            .collect(),
        downward_closed: family.is_downward_closed(),
    };
    Ok(serde_json::to_string_pretty(&file).expect("family serializes"))
}

pub fn family_from_json(text: &str) -> Result<SetFamily> {
    let file: FamilyFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("family file: {e}")))?;
    let sets: Vec<BTreeSet<u64>> = file
        .sets
        .iter()
        .enumerate()
        .map(|(i, set)| {
            let parsed: BTreeSet<u64> = set.iter().copied().collect();
            if parsed.len() != set.len() {
                return Err(Error::Parse(format!("sets[{}] repeats an element", i + 1)));
            }
            Ok(parsed)
        })
        .collect::<Result<_>>()?;
    SetFamily::explicit(file.name.unwrap_or_else(|| "file".into()), sets, file.downward_closed)
}

/// Strategies serialize as index -> "a/b" in index order.
pub fn strategy_map(p: &MixedStrategy) -> std::collections::BTreeMap<u64, String> {
    p.iter().map(|(&i, w)| (i, format_rat(w))).collect()
}

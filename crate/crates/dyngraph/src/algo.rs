//! Registry of the implemented algorithms: stable string ids for the CLI and
//! the harness, and boxed constructors behind the two uniform interfaces.

use std::fmt;
use std::str::FromStr;

use crate::coloring::{CountCol, DynamicColoring, HierCol, RandRCol, RecurseCol};
use crate::matching::{
    DynamicMatching, Hier1Match, Hier2Match, RandR1Match, RandR2Match, TrivialMatch,
};
use crate::BuildError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ColoringAlgoId {
    RecurseCol,
    CountCol,
    RandRCol,
    HierCol,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MatchingAlgoId {
    TrivialMatch,
    Hier1Match,
    Hier2Match,
    RandR1Match,
    RandR2Match,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AlgorithmId {
    Coloring(ColoringAlgoId),
    Matching(MatchingAlgoId),
}

pub const COLORING_ALGOS: [ColoringAlgoId; 4] = [
    ColoringAlgoId::RecurseCol,
    ColoringAlgoId::CountCol,
    ColoringAlgoId::RandRCol,
    ColoringAlgoId::HierCol,
];

pub const MATCHING_ALGOS: [MatchingAlgoId; 5] = [
    MatchingAlgoId::TrivialMatch,
    MatchingAlgoId::Hier1Match,
    MatchingAlgoId::Hier2Match,
    MatchingAlgoId::RandR1Match,
    MatchingAlgoId::RandR2Match,
];

impl fmt::Display for ColoringAlgoId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ColoringAlgoId::RecurseCol => "recursecol",
            ColoringAlgoId::CountCol => "countcol",
            ColoringAlgoId::RandRCol => "randrcol",
            ColoringAlgoId::HierCol => "hiercol",
        };
        f.write_str(name)
    }
}

impl fmt::Display for MatchingAlgoId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            MatchingAlgoId::TrivialMatch => "trivialmatch",
            MatchingAlgoId::Hier1Match => "hier1match",
            MatchingAlgoId::Hier2Match => "hier2match",
            MatchingAlgoId::RandR1Match => "randr1match",
            MatchingAlgoId::RandR2Match => "randr2match",
        };
        f.write_str(name)
    }
}

impl fmt::Display for AlgorithmId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgorithmId::Coloring(id) => id.fmt(f),
            AlgorithmId::Matching(id) => id.fmt(f),
        }
    }
}

impl FromStr for AlgorithmId {
    type Err = BuildError;

    fn from_str(s: &str) -> Result<AlgorithmId, BuildError> {
        let id = match s.to_ascii_lowercase().as_str() {
            "recursecol" => AlgorithmId::Coloring(ColoringAlgoId::RecurseCol),
            "countcol" => AlgorithmId::Coloring(ColoringAlgoId::CountCol),
            "randrcol" => AlgorithmId::Coloring(ColoringAlgoId::RandRCol),
            "hiercol" => AlgorithmId::Coloring(ColoringAlgoId::HierCol),
            "trivialmatch" => AlgorithmId::Matching(MatchingAlgoId::TrivialMatch),
            "hier1match" => AlgorithmId::Matching(MatchingAlgoId::Hier1Match),
            "hier2match" => AlgorithmId::Matching(MatchingAlgoId::Hier2Match),
            "randr1match" => AlgorithmId::Matching(MatchingAlgoId::RandR1Match),
            "randr2match" => AlgorithmId::Matching(MatchingAlgoId::RandR2Match),
            other => return Err(BuildError::UnknownAlgorithm(other.to_string())),
        };
        Ok(id)
    }
}

pub fn build_coloring(
    id: ColoringAlgoId,
    n: usize,
    delta: usize,
    seed: u64,
) -> Result<Box<dyn DynamicColoring>, BuildError> {
    Ok(match id {
        ColoringAlgoId::RecurseCol => Box::new(RecurseCol::new(n, delta, seed)),
        ColoringAlgoId::CountCol => Box::new(CountCol::new(n, delta, seed)?),
        ColoringAlgoId::RandRCol => Box::new(RandRCol::new(n, delta, seed)?),
        ColoringAlgoId::HierCol => Box::new(HierCol::new(n, delta, seed)?),
    })
}

pub fn build_coloring_by_name(
    name: &str,
    n: usize,
    delta: usize,
    seed: u64,
) -> Result<Box<dyn DynamicColoring>, BuildError> {
    match AlgorithmId::from_str(name)? {
        AlgorithmId::Coloring(id) => build_coloring(id, n, delta, seed),
        AlgorithmId::Matching(_) => Err(BuildError::UnknownAlgorithm(format!(
            "{name} is a matching algorithm, expected a coloring one"
        ))),
    }
}

pub fn build_matching(id: MatchingAlgoId, n: usize, delta: usize, seed: u64) -> Box<dyn DynamicMatching> {
    match id {
        MatchingAlgoId::TrivialMatch => Box::new(TrivialMatch::new(n, delta, seed)),
        MatchingAlgoId::Hier1Match => Box::new(Hier1Match::new(n, delta, seed)),
        MatchingAlgoId::Hier2Match => Box::new(Hier2Match::new(n, delta, seed)),
        MatchingAlgoId::RandR1Match => Box::new(RandR1Match::new(n, delta, seed)),
        MatchingAlgoId::RandR2Match => Box::new(RandR2Match::new(n, delta, seed)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for id in COLORING_ALGOS {
            let parsed: AlgorithmId = id.to_string().parse().unwrap();
            assert_eq!(parsed, AlgorithmId::Coloring(id));
        }
        for id in MATCHING_ALGOS {
            let parsed: AlgorithmId = id.to_string().parse().unwrap();
            assert_eq!(parsed, AlgorithmId::Matching(id));
        }
        assert!("nosuchalgo".parse::<AlgorithmId>().is_err());
    }
}

//! Pipeline names and the counts each run is expected to reproduce.

use clap::ValueEnum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Pipeline {
    ExceptionalPairs,
    TwoExceptional,
    ThreeExceptional,
    OneExceptional,
    Spanning,
    Family,
    /// Containment of the multi- and one-exceptional classes in the six maximal triples.
    Cover,
    /// Four-tuples with no exceptional subtriple; the count is the number of counterexamples.
    Dim4,
}

pub fn expected_count(p: Pipeline, k: Option<i64>) -> Option<usize> {
    Some(match p {
        Pipeline::ExceptionalPairs => 32,
        Pipeline::TwoExceptional => 141,
        Pipeline::ThreeExceptional => 29,
        Pipeline::OneExceptional => 82,
        Pipeline::Spanning => 27,
        Pipeline::Family => {
            if k? == 0 {
                51
            } else {
                36
            }
        }
        Pipeline::Cover => 252,
        Pipeline::Dim4 => 0,
    })
}

//! Run statistics collected by the inference engine.

/// Counters and timings for one MAP run, printable as `key value` lines.
///
/// `constraints_without_cpa` counts the translated groundings, which is the
/// number of rows a direct one-row-per-grounding translation would emit;
/// `constraints_with_cpa` counts the rows actually present in the final
/// ILP. With aggregation disabled the two coincide. Phase times for the
/// parallel phases are summed over formulas, so they can exceed wall time.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunReport {
    /// Distinct groundings retrieved over all iterations, including those
    /// discarded during evidence simplification.
    pub groundings_total: u64,
    pub constraints_without_cpa: u64,
    pub constraints_with_cpa: u64,
    pub iterations: u64,
    pub time_grounding_s: f64,
    pub time_aggregation_s: f64,
    pub time_solve_s: f64,
    pub time_total_s: f64,
    /// Weight of the returned interpretation under the full model.
    pub final_weight: f64,
    /// Objective value of the final ILP solution.
    pub ilp_objective: f64,
    /// Constant weight mass outside the ILP: untranslated positive-clause
    /// mass plus negative-clause mass discharged by evidence. At a
    /// fixpoint, `final_weight = ilp_objective + objective_offset` up to
    /// rounding.
    pub objective_offset: f64,
    pub converged: bool,
}

impl std::fmt::Display for RunReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "groundings_total {}", self.groundings_total)?;
        writeln!(f, "constraints_without_cpa {}", self.constraints_without_cpa)?;
        writeln!(f, "constraints_with_cpa {}", self.constraints_with_cpa)?;
        writeln!(f, "iterations {}", self.iterations)?;
        writeln!(f, "time_grounding_s {:.6}", self.time_grounding_s)?;
        writeln!(f, "time_aggregation_s {:.6}", self.time_aggregation_s)?;
        writeln!(f, "time_solve_s {:.6}", self.time_solve_s)?;
        writeln!(f, "time_total_s {:.6}", self.time_total_s)?;
        writeln!(f, "final_weight {}", self.final_weight)?;
        writeln!(f, "ilp_objective {}", self.ilp_objective)?;
        writeln!(f, "objective_offset {}", self.objective_offset)?;
        writeln!(f, "converged {}", self.converged)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_emits_one_line_per_field() {
        let report = RunReport {
            groundings_total: 100,
            constraints_without_cpa: 100,
            constraints_with_cpa: 1,
            iterations: 2,
            final_weight: 150.0,
            ilp_objective: 150.0,
            converged: true,
            ..RunReport::default()
        };
        let text = report.to_string();
        assert_eq!(text.lines().count(), 12);
        assert!(text.contains("constraints_with_cpa 1\n"));
        assert!(text.contains("final_weight 150\n"));
        assert!(text.contains("converged true\n"));
    }
}

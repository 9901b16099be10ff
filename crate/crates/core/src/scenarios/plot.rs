//! Generated gnuplot scripts. Each script reads the CSVs sitting next to it
//! and writes PNGs into the same directory.

use std::fmt::Write;

const PREAMBLE: &str =
    "set datafile separator \",\"\nset terminal pngcairo size 900,600\nset key top right\n";

pub fn spectrum_script(bound_files: &[String]) -> String {
    let mut s = String::from(PREAMBLE);
    s.push_str(
        "set output \"spectrum.png\"\n\
         set xlabel \"level index\"\n\
         set ylabel \"E / kappa\"\n\
         plot \"spectrum.csv\" skip 1 using 1:2 with points pt 7 ps 0.5 title \"eigenvalues\", \\\n\
         \x20    -2 with lines dt 2 lc rgb \"gray\" title \"band edge\"\n\n\
         set output \"participation.png\"\n\
         set logscale y\n\
         set ylabel \"participation ratio\"\n\
         plot \"spectrum.csv\" skip 1 using 1:3 with points pt 7 ps 0.5 notitle\n\
         unset logscale y\n\n\
         set output \"potential.png\"\n\
         set xlabel \"n\"\n\
         set ylabel \"V_n / kappa\"\n\
         plot \"potential.csv\" skip 1 using 1:2 with lines notitle\n",
    );
    if !bound_files.is_empty() {
        s.push_str(
            "\nset output \"bound_states.png\"\nset xlabel \"n\"\nset ylabel \"amplitude\"\nplot ",
        );
        let parts: Vec<String> = bound_files
            .iter()
            .map(|f| format!("\"{f}\" skip 1 using 1:2 with lines title \"{f}\""))
            .collect();
        s.push_str(&parts.join(", \\\n     "));
        s.push('\n');
    }
    s
}

pub fn evolution_script(half_width: usize, dt_row: f64) -> String {
    let mut s = String::from(PREAMBLE);
    let _ = write!(
        s,
        "set output \"amplitude_map.png\"\n\
         set xlabel \"n\"\n\
         set ylabel \"kappa t\"\n\
         set cblabel \"|c_n|\"\n\
         set view map\n\
         plot \"amplitude_map.csv\" matrix using ($1-{half_width}):($2*{dt_row}):3 with image notitle\n\n\
         set output \"series.png\"\n\
         set xlabel \"kappa t\"\n\
         set ylabel \"\"\n\
         set yrange [0:1.05]\n\
         plot \"series.csv\" skip 1 using 1:3 with lines title \"localized fraction\", \\\n\
         \x20    \"series.csv\" skip 1 using 1:4 with lines title \"co-moving overlap\", \\\n\
         \x20    \"series.csv\" skip 1 using 1:6 with lines title \"tail norm\"\n\
         set autoscale y\n\n\
         set output \"states.png\"\n\
         set xlabel \"n\"\n\
         set ylabel \"|c_n|^2\"\n\
         plot \"initial_state.csv\" using 1:($2**2+$3**2) with lines title \"initial\", \\\n\
         \x20    \"final_state.csv\" using 1:($2**2+$3**2) with lines title \"final\"\n"
    );
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scripts_reference_their_inputs() {
        let s = spectrum_script(&["bound_state_0.csv".into(), "bound_state_1.csv".into()]);
        for f in [
            "spectrum.csv",
            "potential.csv",
            "bound_state_0.csv",
            "bound_state_1.csv",
        ] {
            assert!(s.contains(f), "{f}");
        }
        let e = evolution_script(400, 1.0);
        for f in [
            "amplitude_map.csv",
            "series.csv",
            "initial_state.csv",
            "final_state.csv",
        ] {
            assert!(e.contains(f), "{f}");
        }
        assert!(e.contains("($1-400):($2*1)"));
    }
}

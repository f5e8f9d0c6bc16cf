use legendrian_core::report::{
    build_construction_report, plot_front, plot_fronts, run_suite, FrontSource, Suite, SuiteConfig,
};
use legendrian_core::zoo::{cusp_counts, CurveExport};

fn parse(svg: &str) -> roxmltree::Document<'_> {
    roxmltree::Document::parse(svg).expect("well-formed svg")
}

#[test]
fn curves_suite_passes_up_to_thirty() {
    let config = SuiteConfig::quick();
    let r = run_suite(Suite::Curves, &config).unwrap();
    assert!(r.passed(), "{}", r.summary_table());
    for m in 2..=30 {
        assert!(
            r.checks
                .iter()
                .any(|c| c.id.starts_with(&format!("curves.cusps.m{m}"))),
            "m = {m}"
        );
    }
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let config = SuiteConfig::quick();
    let a = run_suite(Suite::Schedules, &config)
        .unwrap()
        .to_json()
        .unwrap();
    let b = run_suite(Suite::Schedules, &config)
        .unwrap()
        .to_json()
        .unwrap();
    assert_eq!(a, b);
}

#[test]
fn construction_of_three_steps() {
    let r = build_construction_report(3, &SuiteConfig::quick()).unwrap();
    assert_eq!(r.suite, "construction-3");
    assert!(r.passed(), "{}", r.summary_table());
    let m: Vec<f64> = (1..=3)
        .map(|i| r.get(&format!("construction.m{i}")).unwrap().value)
        .collect();
    assert_eq!(m, vec![22.0, 27.0, 39.0]);
    let sums: Vec<f64> = (1..=3)
        .map(|i| r.get(&format!("construction.sum{i}")).unwrap().value)
        .collect();
    assert!(sums.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn svg_figures_are_well_formed() {
    for src in [
        FrontSource::Gamma(1),
        FrontSource::Gamma(3),
        FrontSource::Sigma { m: 4, w: 0.5 },
        FrontSource::Birth(0.5),
        FrontSource::File(CurveExport::gamma(2, 501)),
    ] {
        let fig = plot_front(&src).unwrap();
        let doc = parse(&fig.svg);
        assert_eq!(doc.root_element().tag_name().name(), "svg");
        let front = doc
            .descendants()
            .find(|n| n.attribute("class") == Some("front"))
            .expect("front polyline");
        assert!(front.attribute("points").is_some_and(|p| !p.is_empty()));
        let cusps = doc
            .descendants()
            .filter(|n| n.attribute("class") == Some("cusp"))
            .count();
        assert_eq!(cusps, fig.cusp_markers);
    }
    let (r, l) = cusp_counts(3);
    assert_eq!(
        plot_front(&FrontSource::Gamma(3)).unwrap().cusp_markers,
        r + l
    );
}

#[test]
fn birth_figure_shows_smooth_then_zigzag() {
    let fig = plot_fronts(&[FrontSource::Psi(-1.0), FrontSource::Psi(1.0)]).unwrap();
    let doc = parse(&fig.svg);
    let panels: Vec<_> = doc
        .descendants()
        .filter(|n| n.attribute("class") == Some("panel"))
        .collect();
    assert_eq!(panels.len(), 2);
    let cusps_in = |i: usize| {
        panels[i]
            .descendants()
            .filter(|n| n.attribute("class") == Some("cusp"))
            .count()
    };
    assert_eq!((cusps_in(0), cusps_in(1)), (0, 2));
}

use racg_core::verify::ContractionReport;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 56.0;

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Scatter of distance after against distance before, with the fitted line
/// and the diagonal for reference.
pub fn ratio_scatter(title: &str, report: &ContractionReport) -> String {
    let xmax = report
        .records
        .iter()
        .map(|r| r.d_before)
        .fold(1e-9, f64::max);
    let ymax = report.records.iter().map(|r| r.value).fold(xmax, f64::max);
    let sx = |x: f64| MARGIN + x / xmax * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - y / ymax * (HEIGHT - 2.0 * MARGIN);
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    );
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    out.push_str(&format!(
        "<text x=\"{}\" y=\"24\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">{}</text>\n",
        WIDTH / 2.0,
        escape(title)
    ));
    let (x0, y0, x1, y1) = (sx(0.0), sy(0.0), sx(xmax), sy(ymax));
    out.push_str(&format!(
        "<path d=\"M{x0:.2} {y1:.2} L{x0:.2} {y0:.2} L{x1:.2} {y0:.2}\" fill=\"none\" stroke=\"black\"/>\n"
    ));
    out.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">d before (max {xmax:.3})</text>\n",
        WIDTH / 2.0,
        HEIGHT - 16.0
    ));
    out.push_str(&format!(
        "<text x=\"16\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 {:.2})\">d after (max {ymax:.3})</text>\n",
        HEIGHT / 2.0,
        HEIGHT / 2.0
    ));
    let diag = xmax.min(ymax);
    out.push_str(&format!(
        "<line x1=\"{x0:.2}\" y1=\"{y0:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"gray\" stroke-dasharray=\"4 4\"/>\n",
        sx(diag),
        sy(diag)
    ));
    for r in &report.records {
        out.push_str(&format!(
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"1.5\" fill=\"steelblue\" fill-opacity=\"0.6\"/>\n",
            sx(r.d_before),
            sy(r.value)
        ));
    }
    let fit = report.fitted_constants;
    let line = |x: f64| (fit.slope * x + fit.intercept).clamp(0.0, ymax);
    out.push_str(&format!(
        "<line x1=\"{x0:.2}\" y1=\"{:.2}\" x2=\"{x1:.2}\" y2=\"{:.2}\" stroke=\"firebrick\"/>\n",
        sy(line(0.0)),
        sy(line(xmax))
    ));
    out.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" fill=\"firebrick\">slope {:.4}, intercept {:.4}, max ratio {:.4}</text>\n",
        MARGIN + 8.0,
        MARGIN,
        fit.slope,
        fit.intercept,
        report.max_ratio
    ));
    out.push_str("</svg>\n");
    out
}

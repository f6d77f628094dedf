use crate::args::Format;

/// Renders rows as CSV or as right-aligned text columns. Cells are assumed
/// free of commas in CSV mode.
pub fn render(header: &[&str], rows: &[Vec<String>], format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = header.join(",");
            out.push('\n');
            for r in rows {
                out += &r.join(",");
                out.push('\n');
            }
            out
        }
        Format::Text => {
            let widths: Vec<usize> = (0..header.len())
                .map(|i| {
                    rows.iter()
                        .map(|r| r[i].chars().count())
                        .chain([header[i].len()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let line = |cells: &mut dyn Iterator<Item = &str>| -> String {
                let padded: Vec<String> = cells
                    .zip(&widths)
                    .map(|(c, &w)| format!("{c:<w$}"))
                    .collect();
                padded.join("  ").trim_end().to_string() + "\n"
            };
            let mut out = line(&mut header.iter().copied());
            for r in rows {
                out += &line(&mut r.iter().map(String::as_str));
            }
            out
        }
    }
}

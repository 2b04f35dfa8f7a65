//! Input records, output rows, and their CSV/JSON encodings.
//!
//! Input columns are looked up by header name, so extra columns are ignored.
//! Output floats are written with 9 significant digits.

use std::io::{Read, Write};

use serde_json::{Map, Value};

use super::config::Schema;
use super::odds::{american_odds_to_prob, odds_pair_prob};
use crate::confseq::Decision;
use crate::scoring::{categorical_diff, kstep_diff, pointwise_diff, ScoringRule};
use crate::Error;

/// A data problem tied to a physical line of the input.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("line {line}: {msg}")]
pub struct DataError {
    pub line: u64,
    pub msg: String,
}

fn data_err(line: u64, msg: impl Into<String>) -> DataError {
    DataError {
        line,
        msg: msg.into(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Forecasts {
    Binary { p: f64, q: f64 },
    KStep { p: Vec<f64>, q: Vec<f64> },
    Categorical { p: Vec<f64>, q: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForecastRecord {
    pub t: u64,
    pub forecasts: Forecasts,
    /// Binary outcome, or the 1-based class index for categorical input.
    pub y: u8,
    /// Input line, for error reporting.
    pub line: u64,
}

impl ForecastRecord {
    /// Empirical differential `δ̂_t` and the bound it obeys.
    pub fn differential(&self, rule: ScoringRule, schema: &Schema) -> Result<f64, Error> {
        let d = match (&self.forecasts, schema) {
            (Forecasts::Binary { p, q }, _) => pointwise_diff(rule, *p, *q, self.y)?,
            (Forecasts::KStep { p, q }, Schema::KStep(w)) => kstep_diff(rule, w, p, q, self.y)?,
            (Forecasts::Categorical { p, q }, _) => {
                let k = p.len();
                let mut onehot = vec![0u8; k];
                onehot[usize::from(self.y) - 1] = 1;
                categorical_diff(rule, p, q, &onehot)?
            }
            (Forecasts::KStep { .. }, _) => {
                return Err(Error::Config("k-step record without k-step weights".into()))
            }
        };
        Ok(d.value)
    }
}

/// Maps byte offsets to 1-based line numbers. The reader's own line counter
/// drifts on CRLF input, and after a CRLF its byte offset points at the
/// `\n` rather than past it, hence the `<=`.
struct LineIndex(Vec<usize>);

impl LineIndex {
    fn new(data: &[u8]) -> Self {
        LineIndex(data.iter().enumerate().filter(|(_, &b)| b == b'\n').map(|(i, _)| i).collect())
    }

    fn line(&self, pos: Option<&csv::Position>) -> u64 {
        pos.map_or(0, |p| {
            let byte = p.byte() as usize;
            1 + self.0.partition_point(|&nl| nl <= byte) as u64
        })
    }
}

fn slurp<R: Read>(mut input: R) -> Result<Vec<u8>, DataError> {
    let mut buf = Vec::new();
    input
        .read_to_end(&mut buf)
        .map_err(|e| data_err(0, format!("read failed: {e}")))?;
    Ok(buf)
}

fn column(headers: &csv::StringRecord, name: &str) -> Result<usize, DataError> {
    headers
        .iter()
        .position(|h| h.trim() == name)
        .ok_or_else(|| data_err(1, format!("missing column {name:?}")))
}

fn columns(headers: &csv::StringRecord, names: &[String]) -> Result<Vec<usize>, DataError> {
    names.iter().map(|n| column(headers, n)).collect()
}

fn field<'a>(rec: &'a csv::StringRecord, idx: usize, name: &str, line: u64) -> Result<&'a str, DataError> {
    rec.get(idx)
        .map(str::trim)
        .ok_or_else(|| data_err(line, format!("missing field {name:?}")))
}

fn parse_f64(rec: &csv::StringRecord, idx: usize, name: &str, line: u64) -> Result<f64, DataError> {
    let s = field(rec, idx, name, line)?;
    s.parse::<f64>()
        .map_err(|_| data_err(line, format!("{name} = {s:?} is not a number")))
}

fn parse_prob(rec: &csv::StringRecord, idx: usize, name: &str, line: u64) -> Result<f64, DataError> {
    let v = parse_f64(rec, idx, name, line)?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(data_err(line, format!("{name} = {v} is not in [0, 1]")))
    }
}

fn parse_int<T: std::str::FromStr>(rec: &csv::StringRecord, idx: usize, name: &str, line: u64) -> Result<T, DataError> {
    let s = field(rec, idx, name, line)?;
    s.parse::<T>()
        .map_err(|_| data_err(line, format!("{name} = {s:?} is not an integer")))
}

fn names(prefix: &str, k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("{prefix}{i}")).collect()
}

/// Reads every record of `input` under `schema`. Times must be strictly
/// increasing.
pub fn read_records<R: Read>(input: R, schema: &Schema) -> Result<Vec<ForecastRecord>, DataError> {
    let data = slurp(input)?;
    let lines = LineIndex::new(&data);
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(data.as_slice());
    let headers = rdr
        .headers()
        .map_err(|e| data_err(1, format!("unreadable header: {e}")))?
        .clone();
    let t_col = column(&headers, "t")?;
    let y_col = column(&headers, "y")?;

    enum Layout {
        Binary(usize, usize),
        Odds(usize, usize, Option<(usize, usize)>),
        Wide(Vec<usize>, Vec<usize>),
    }
    let layout = match schema {
        Schema::Binary => Layout::Binary(column(&headers, "p")?, column(&headers, "q")?),
        Schema::Odds => {
            let opp = match (column(&headers, "odds_p_opp"), column(&headers, "odds_q_opp")) {
                (Ok(a), Ok(b)) => Some((a, b)),
                _ => None,
            };
            Layout::Odds(column(&headers, "odds_p")?, column(&headers, "odds_q")?, opp)
        }
        Schema::KStep(w) => Layout::Wide(
            columns(&headers, &names("p", w.len()))?,
            columns(&headers, &names("q", w.len()))?,
        ),
        Schema::Categorical { classes } => Layout::Wide(
            columns(&headers, &names("p_", *classes))?,
            columns(&headers, &names("q_", *classes))?,
        ),
    };

    let mut out = Vec::new();
    let mut last_t: Option<u64> = None;
    for result in rdr.records() {
        let rec = result.map_err(|e| data_err(lines.line(e.position()), format!("malformed row: {e}")))?;
        let line = lines.line(rec.position());
        let t: u64 = parse_int(&rec, t_col, "t", line)?;
        if let Some(prev) = last_t {
            if t <= prev {
                return Err(data_err(line, format!("t = {t} does not increase (previous {prev})")));
            }
        }
        last_t = Some(t);
        let y: u8 = parse_int(&rec, y_col, "y", line)?;
        let forecasts = match &layout {
            Layout::Binary(pc, qc) => Forecasts::Binary {
                p: parse_prob(&rec, *pc, "p", line)?,
                q: parse_prob(&rec, *qc, "q", line)?,
            },
            Layout::Odds(pc, qc, opp) => {
                let op: i64 = parse_int(&rec, *pc, "odds_p", line)?;
                let oq: i64 = parse_int(&rec, *qc, "odds_q", line)?;
                match opp {
                    Some((pa, qa)) => {
                        let opa: i64 = parse_int(&rec, *pa, "odds_p_opp", line)?;
                        let oqa: i64 = parse_int(&rec, *qa, "odds_q_opp", line)?;
                        Forecasts::Binary {
                            p: odds_pair_prob(op, opa),
                            q: odds_pair_prob(oq, oqa),
                        }
                    }
                    None => Forecasts::Binary {
                        p: american_odds_to_prob(op),
                        q: american_odds_to_prob(oq),
                    },
                }
            }
            Layout::Wide(pcs, qcs) => {
                let p = pcs
                    .iter()
                    .map(|&c| parse_prob(&rec, c, "p", line))
                    .collect::<Result<Vec<_>, _>>()?;
                let q = qcs
                    .iter()
                    .map(|&c| parse_prob(&rec, c, "q", line))
                    .collect::<Result<Vec<_>, _>>()?;
                match schema {
                    Schema::Categorical { .. } => Forecasts::Categorical { p, q },
                    _ => Forecasts::KStep { p, q },
                }
            }
        };
        let y_ok = match schema {
            Schema::Categorical { classes } => y >= 1 && usize::from(y) <= *classes,
            _ => y <= 1,
        };
        if !y_ok {
            return Err(data_err(line, format!("y = {y} is not a valid outcome")));
        }
        out.push(ForecastRecord {
            t,
            forecasts,
            y,
            line,
        });
    }
    Ok(out)
}

pub const OUTPUT_COLUMNS: [&str; 11] = [
    "t", "delta_hat", "vhat", "lcb", "ucb", "width", "e_pq", "e_qp", "p_pq", "p_qp", "decision",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutputRow {
    pub t: u64,
    pub delta_hat: f64,
    pub vhat: f64,
    pub lcb: f64,
    pub ucb: f64,
    pub width: f64,
    pub e_pq: f64,
    pub e_qp: f64,
    pub p_pq: f64,
    pub p_qp: f64,
    pub decision: Decision,
}

/// `%.9g`-style formatting: 9 significant digits, trailing zeros dropped,
/// scientific notation outside `[1e-5, 1e9)`.
pub fn fmt_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{x:.8e}");
    let (mant, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..9).contains(&exp) {
        let mant = mant.trim_end_matches('0').trim_end_matches('.');
        return format!("{mant}e{exp}");
    }
    let decimals = (8 - exp) as usize;
    let fixed = format!("{x:.decimals$}");
    if fixed.contains('.') {
        fixed.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        fixed
    }
}

impl OutputRow {
    fn floats(&self) -> [f64; 9] {
        [
            self.delta_hat,
            self.vhat,
            self.lcb,
            self.ucb,
            self.width,
            self.e_pq,
            self.e_qp,
            self.p_pq,
            self.p_qp,
        ]
    }

    pub fn csv_fields(&self) -> Vec<String> {
        let mut v = vec![self.t.to_string()];
        v.extend(self.floats().iter().map(|&x| fmt_sig9(x)));
        v.push(self.decision.to_string());
        v
    }

    /// Keys as in the CSV header; non-finite numbers become `null`.
    pub fn json_object(&self) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("t".into(), Value::from(self.t));
        for (k, x) in OUTPUT_COLUMNS[1..10].iter().zip(self.floats()) {
            let rounded: f64 = fmt_sig9(x).parse().unwrap_or(f64::NAN);
            let v = serde_json::Number::from_f64(rounded).map_or(Value::Null, Value::Number);
            m.insert((*k).into(), v);
        }
        m.insert("decision".into(), Value::from(self.decision.as_str()));
        m
    }
}

/// Writes rows as CSV with the fixed column order, plus any extra columns.
pub fn write_rows<W: Write>(
    out: W,
    rows: &[OutputRow],
    extra: Option<(&str, &[f64])>,
) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = OUTPUT_COLUMNS.to_vec();
    if let Some((name, _)) = extra {
        header.push(name);
    }
    w.write_record(&header)?;
    for (i, row) in rows.iter().enumerate() {
        let mut f = row.csv_fields();
        if let Some((_, vals)) = extra {
            f.push(fmt_sig9(vals[i]));
        }
        w.write_record(&f)?;
    }
    w.flush()
}

/// One JSON object per line.
pub fn write_rows_json<W: Write>(
    mut out: W,
    rows: &[OutputRow],
    extra: Option<(&str, &[f64])>,
) -> std::io::Result<()> {
    for (i, row) in rows.iter().enumerate() {
        let mut obj = row.json_object();
        if let Some((name, vals)) = extra {
            let rounded: f64 = fmt_sig9(vals[i]).parse().unwrap_or(f64::NAN);
            let v = serde_json::Number::from_f64(rounded).map_or(Value::Null, Value::Number);
            obj.insert(name.into(), v);
        }
        serde_json::to_writer(&mut out, &Value::Object(obj))?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

/// Parses CSV output produced by [`write_rows`]; extra columns are ignored.
pub fn read_rows<R: Read>(input: R) -> Result<Vec<OutputRow>, DataError> {
    let data = slurp(input)?;
    let lines = LineIndex::new(&data);
    let mut rdr = csv::Reader::from_reader(data.as_slice());
    let headers = rdr
        .headers()
        .map_err(|e| data_err(1, format!("unreadable header: {e}")))?
        .clone();
    let idx: Vec<usize> = OUTPUT_COLUMNS
        .iter()
        .map(|c| column(&headers, c))
        .collect::<Result<_, _>>()?;
    let mut rows = Vec::new();
    for result in rdr.records() {
        let rec = result.map_err(|e| data_err(lines.line(e.position()), e.to_string()))?;
        let line = lines.line(rec.position());
        let f = |k: usize| parse_f64(&rec, idx[k], OUTPUT_COLUMNS[k], line);
        let decision = field(&rec, idx[10], "decision", line)?
            .parse::<Decision>()
            .map_err(|e| data_err(line, e.to_string()))?;
        rows.push(OutputRow {
            t: parse_int(&rec, idx[0], "t", line)?,
            delta_hat: f(1)?,
            vhat: f(2)?,
            lcb: f(3)?,
            ucb: f(4)?,
            width: f(5)?,
            e_pq: f(6)?,
            e_qp: f(7)?,
            p_pq: f(8)?,
            p_qp: f(9)?,
            decision,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scoring::KStepWeights;

    #[test]
    fn sig9() {
        assert_eq!(fmt_sig9(0.0), "0");
        assert_eq!(fmt_sig9(1.0), "1");
        assert_eq!(fmt_sig9(-0.006876142857), "-0.00687614286");
        assert_eq!(fmt_sig9(123456789.4), "123456789");
        assert_eq!(fmt_sig9(1234567890.0), "1.23456789e9");
        assert_eq!(fmt_sig9(1.5e-7), "1.5e-7");
        assert_eq!(fmt_sig9(0.1 + 0.2), "0.3");
        assert_eq!(fmt_sig9(f64::INFINITY), "inf");
        assert_eq!(fmt_sig9(2.0 / 3.0), "0.666666667");
        assert_eq!("inf".parse::<f64>().unwrap(), f64::INFINITY);
    }

    #[test]
    fn binary_records() {
        let csv = "t,p,q,y,extra\r\n1,0.4,0.6,1,x\r\n2, 0.5 ,0.5,0,y\n";
        let recs = read_records(csv.as_bytes(), &Schema::Binary).unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[1].forecasts, Forecasts::Binary { p: 0.5, q: 0.5 });
        assert_eq!(recs[1].line, 3);
    }

    #[test]
    fn reordered_columns() {
        let csv = "y,q,t,p\n1,0.6,1,0.4\n";
        let recs = read_records(csv.as_bytes(), &Schema::Binary).unwrap();
        assert_eq!(recs[0].forecasts, Forecasts::Binary { p: 0.4, q: 0.6 });
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("t,p,q,y\n1,0.4,0.6,1\n2,abc,0.6,1\n", 3),
            ("t,p,q,y\n1,0.4,0.6,1\n1,0.4,0.6,1\n", 3),
            ("t,p,q,y\n1,0.4,0.6,1\n2,0.4,0.6,1\n3,1.4,0.6,1\n", 4),
            ("t,p,q,y\n1,0.4,0.6,2\n", 2),
            ("t,p,q,y\n1,0.4,0.6\n", 2),
        ];
        for (csv, line) in cases {
            let err = read_records(csv.as_bytes(), &Schema::Binary).unwrap_err();
            assert_eq!(err.line, line, "{csv:?}: {err}");
        }
        let err = read_records("t,p,y\n".as_bytes(), &Schema::Binary).unwrap_err();
        assert!(err.msg.contains("\"q\""));
    }

    #[test]
    fn odds_records() {
        let csv = "t,odds_p,odds_q,y\n1,-140,120,1\n";
        let recs = read_records(csv.as_bytes(), &Schema::Odds).unwrap();
        match recs[0].forecasts {
            Forecasts::Binary { p, q } => {
                assert!((p - 0.58333).abs() < 1e-5);
                assert!((q - 0.45455).abs() < 1e-5);
            }
            _ => unreachable!(),
        }
        let csv = "t,odds_p,odds_q,y,odds_p_opp,odds_q_opp\n1,-140,-150,1,120,130\n";
        let recs = read_records(csv.as_bytes(), &Schema::Odds).unwrap();
        match recs[0].forecasts {
            Forecasts::Binary { p, .. } => assert!((p - 0.562).abs() < 5e-4),
            _ => unreachable!(),
        }
    }

    #[test]
    fn wide_records() {
        let w = KStepWeights::uniform(2).unwrap();
        let csv = "t,p1,p2,q1,q2,y\n1,0.6,0.7,0.4,0.5,1\n";
        let recs = read_records(csv.as_bytes(), &Schema::KStep(w.clone())).unwrap();
        let d = recs[0].differential(ScoringRule::Brier, &Schema::KStep(w)).unwrap();
        let want = 0.5 * (-(0.4f64).powi(2) - 0.3f64.powi(2)) - 0.5 * (-(0.6f64).powi(2) - 0.5f64.powi(2));
        assert!((d - want).abs() < 1e-15);

        let schema = Schema::Categorical { classes: 3 };
        let csv = "t,p_1,p_2,p_3,q_1,q_2,q_3,y\n1,0.2,0.5,0.3,0.6,0.2,0.2,2\n";
        let recs = read_records(csv.as_bytes(), &schema).unwrap();
        let d = recs[0].differential(ScoringRule::Brier, &schema).unwrap();
        let sp = -(0.04 + 0.25 + 0.09);
        let sq = -(0.36 + 0.64 + 0.04);
        assert!((d - (sp - sq)).abs() < 1e-12);
        let bad = "t,p_1,p_2,p_3,q_1,q_2,q_3,y\n1,0.2,0.5,0.3,0.6,0.2,0.2,0\n";
        assert!(read_records(bad.as_bytes(), &schema).is_err());
    }

    #[test]
    fn rows_round_trip() {
        let row = OutputRow {
            t: 3,
            delta_hat: -0.0123456789123,
            vhat: 0.5,
            lcb: -1.2,
            ucb: 1.1,
            width: 2.3,
            e_pq: 0.8,
            e_qp: f64::INFINITY,
            p_pq: 1.0,
            p_qp: 0.0,
            decision: Decision::Undecided,
        };
        let mut buf = Vec::new();
        write_rows(&mut buf, &[row], None).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("t,delta_hat,vhat,lcb,ucb,width,e_pq,e_qp,p_pq,p_qp,decision\n"));
        let back = read_rows(buf.as_slice()).unwrap();
        assert_eq!(back[0].delta_hat, -0.0123456789);
        assert_eq!(back[0].e_qp, f64::INFINITY);
        let mut buf2 = Vec::new();
        write_rows(&mut buf2, &back, None).unwrap();
        assert_eq!(buf, buf2);

        let mut js = Vec::new();
        write_rows_json(&mut js, &[row], Some(("delta_true", &[0.25]))).unwrap();
        let v: Value = serde_json::from_slice(&js).unwrap();
        assert_eq!(v["decision"], "undecided");
        assert_eq!(v["e_qp"], Value::Null);
        assert_eq!(v["delta_true"], 0.25);
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys.len(), 12);
    }
}

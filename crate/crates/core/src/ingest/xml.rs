//! Streaming reader for Stack Exchange data-dump XML: a flat sequence of
//! `<row .../>` elements under one wrapper element. One pass, one reused
//! buffer; memory stays bounded by the largest single row.

use std::io::BufRead;

use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;

use crate::error::{Error, Result};

/// Attributes of one `<row/>`, in document order, XML-unescaped.
#[derive(Debug, Clone, Default)]
pub struct RowAttrs {
    attrs: Vec<(String, String)>,
}

impl RowAttrs {
    pub fn get(&self, name: &str) -> Option<&str> {
        self.attrs
            .iter()
            .find(|(k, _)| k == name)
            .map(|(_, v)| v.as_str())
    }

    pub fn is_empty(&self) -> bool {
        self.attrs.is_empty()
    }
}

/// One row outcome: the ordinal (1-based), and either the attributes or a
/// row-local problem description (bad escapes, duplicate attributes, ...).
pub type RowResult = std::result::Result<RowAttrs, String>;

/// Pull-based row reader. Iterates `(row_ordinal, RowResult)`; a document
/// level XML error (truncation, tag mismatch) terminates iteration with a
/// fatal `Error::Xml` carrying the byte position.
pub struct XmlRowReader<R: BufRead> {
    reader: Reader<R>,
    buf: Vec<u8>,
    row_ordinal: u64,
    done: bool,
}

impl<R: BufRead> XmlRowReader<R> {
    pub fn new(source: R) -> Self {
        let reader = Reader::from_reader(source);
        XmlRowReader {
            reader,
            buf: Vec::with_capacity(4096),
            row_ordinal: 0,
            done: false,
        }
    }

    fn extract(e: &BytesStart<'_>) -> RowResult {
        let mut attrs = Vec::new();
        for attr in e.attributes() {
            let attr = attr.map_err(|err| format!("bad attribute: {err}"))?;
            let key = String::from_utf8_lossy(attr.key.as_ref()).into_owned();
            let value = attr
                .unescape_value()
                .map_err(|err| format!("bad attribute value for {key:?}: {err}"))?
                .into_owned();
            attrs.push((key, value));
        }
        Ok(RowAttrs { attrs })
    }
}

impl<R: BufRead> Iterator for XmlRowReader<R> {
    type Item = Result<(u64, RowResult)>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        loop {
            self.buf.clear();
            match self.reader.read_event_into(&mut self.buf) {
                Ok(Event::Eof) => {
                    self.done = true;
                    return None;
                }
                Ok(Event::Empty(ref e)) | Ok(Event::Start(ref e))
                    if e.name().as_ref() == b"row" =>
                {
                    self.row_ordinal += 1;
                    return Some(Ok((self.row_ordinal, Self::extract(e))));
                }
                Ok(_) => continue,
                Err(err) => {
                    self.done = true;
                    return Some(Err(Error::Xml {
                        position: self.reader.buffer_position(),
                        message: err.to_string(),
                    }));
                }
            }
        }
    }
}

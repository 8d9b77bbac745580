//! Parser for the scanner's Verilog subset: ANSI module headers with
//! attributes, attributed instantiations, and `` `AUTOMATIC_* `` macro uses.
//! Everything else in a module body is skipped by balanced-token scanning.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::ast::{
    AttributeSet, Direction, InstanceDecl, Module, PlainInstance, PortDecl, SourceUnit,
};
use crate::error::{Error, Result};
use crate::token::{tokenize, Token, TokenKind};

/// Attribute keys the tool understands; anything else warns.
const KNOWN_ATTR_KEYS: &[&str] = &[
    "external",
    "signal_type",
    "cd",
    "description",
    "aw",
    "lb_automatic",
    "gvar",
    "gcnt",
];

/// Parse one attribute instance. The cursor must sit on `(*`; on success it
/// is left just past `*)`.
pub fn parse_attributes(toks: &[Token], pos: &mut usize) -> Result<AttributeSet> {
    let open = &toks[*pos];
    debug_assert_eq!(open.kind, TokenKind::AttrOpen);
    *pos += 1;
    let mut set = AttributeSet::default();
    loop {
        let t = toks
            .get(*pos)
            .ok_or_else(|| Error::parse(open.line, open.col, "attribute list missing `*)`"))?;
        match t.kind {
            TokenKind::AttrClose => {
                *pos += 1;
                return Ok(set);
            }
            TokenKind::Ident | TokenKind::Keyword => {
                let key = t.text.clone();
                if set.has(&key) {
                    return Err(Error::parse(
                        t.line,
                        t.col,
                        format!("duplicate attribute key '{key}'"),
                    ));
                }
                let (kline, kcol) = (t.line, t.col);
                *pos += 1;
                let mut value = None;
                if toks.get(*pos).map(|t| t.is_punct("=")) == Some(true) {
                    *pos += 1;
                    let v = toks.get(*pos).ok_or_else(|| {
                        Error::parse(kline, kcol, "attribute list missing `*)`")
                    })?;
                    value = Some(match v.kind {
                        TokenKind::Str => v.string_value(),
                        TokenKind::Number => v.text.replace('_', ""),
                        _ => {
                            return Err(Error::parse(
                                v.line,
                                v.col,
                                format!(
                                    "attribute '{key}' must be a string or integer literal, got '{}'",
                                    v.text
                                ),
                            ));
                        }
                    });
                    *pos += 1;
                }
                set.entries.push((key, value));
                // separator
                match toks.get(*pos) {
                    Some(t) if t.is_punct(",") => {
                        *pos += 1;
                    }
                    Some(t) if t.kind == TokenKind::AttrClose => {}
                    Some(t) => {
                        return Err(Error::parse(
                            t.line,
                            t.col,
                            format!("expected ',' or '*)' in attribute list, got '{}'", t.text),
                        ));
                    }
                    None => {
                        return Err(Error::parse(open.line, open.col, "attribute list missing `*)`"));
                    }
                }
            }
            _ => {
                return Err(Error::parse(
                    t.line,
                    t.col,
                    format!("expected attribute key, got '{}'", t.text),
                ));
            }
        }
    }
}

struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
    path: &'a str,
    warnings: Vec<String>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.toks.get(self.pos)
    }

    fn peek_at(&self, n: usize) -> Option<&'a Token> {
        self.toks.get(self.pos + n)
    }

    fn bump(&mut self) -> Option<&'a Token> {
        let t = self.toks.get(self.pos);
        self.pos += 1;
        t
    }

    fn err_here(&self, msg: impl Into<String>) -> Error {
        match self.peek() {
            Some(t) => Error::parse(t.line, t.col, msg),
            None => {
                let (l, c) = self
                    .toks
                    .last()
                    .map(|t| (t.line, t.col))
                    .unwrap_or((1, 1));
                Error::parse(l, c, msg)
            }
        }
    }

    fn expect_ident(&mut self, what: &str) -> Result<&'a Token> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Ident => Ok(self.bump().unwrap()),
            _ => Err(self.err_here(format!("expected {what}"))),
        }
    }

    fn expect_punct(&mut self, p: &str) -> Result<()> {
        match self.peek() {
            Some(t) if t.is_punct(p) => {
                self.bump();
                Ok(())
            }
            _ => Err(self.err_here(format!("expected '{p}'"))),
        }
    }

    fn warn_unknown_keys(&mut self, attrs: &AttributeSet, line: u32, col: u32) {
        for (k, _) in &attrs.entries {
            if !KNOWN_ATTR_KEYS.contains(&k.as_str()) {
                self.warnings.push(format!(
                    "{}:{}:{}: unknown attribute key '{}'",
                    self.path, line, col, k
                ));
            }
        }
    }

    /// Skip a balanced `( ... )`; cursor must be on `(`.
    fn skip_parens(&mut self) -> Result<()> {
        let open = self.peek().cloned();
        self.expect_punct("(")?;
        let mut depth = 1i32;
        while depth > 0 {
            match self.bump() {
                Some(t) if t.is_punct("(") || t.kind == TokenKind::AttrOpen => depth += 1,
                Some(t) if t.is_punct(")") || t.kind == TokenKind::AttrClose => depth -= 1,
                Some(_) => {}
                None => {
                    let o = open.unwrap();
                    return Err(Error::parse(o.line, o.col, "unbalanced '('"));
                }
            }
        }
        Ok(())
    }

    fn parse_range(&mut self) -> Result<Option<(i64, i64)>> {
        if self.peek().map(|t| t.is_punct("[")) != Some(true) {
            return Ok(None);
        }
        self.bump();
        let msb = self.parse_int_bound()?;
        self.expect_punct(":")?;
        let lsb = self.parse_int_bound()?;
        self.expect_punct("]")?;
        Ok(Some((msb, lsb)))
    }

    fn parse_int_bound(&mut self) -> Result<i64> {
        let neg = if self.peek().map(|t| t.is_punct("-")) == Some(true) {
            self.bump();
            true
        } else {
            false
        };
        match self.peek() {
            Some(t) if t.kind == TokenKind::Number => {
                let v = t
                    .number_value()
                    .ok_or_else(|| Error::parse(t.line, t.col, "integer out of range"))?;
                self.bump();
                Ok(if neg { -v } else { v })
            }
            _ => Err(self.err_here("port range bounds must be integer literals")),
        }
    }

    fn parse_port_list(&mut self, module_name: &str) -> Result<Vec<PortDecl>> {
        let mut ports: Vec<PortDecl> = Vec::new();
        // inherited by bare-identifier continuation declarations
        let mut last_sig: Option<(Direction, bool, Option<(i64, i64)>)> = None;
        loop {
            match self.peek() {
                Some(t) if t.is_punct(")") => {
                    self.bump();
                    break;
                }
                None => return Err(self.err_here("unterminated port list")),
                _ => {}
            }
            let mut attrs = AttributeSet::default();
            if let Some(t) = self.peek() {
                if t.kind == TokenKind::AttrOpen {
                    let (l, c) = (t.line, t.col);
                    attrs = parse_attributes(self.toks, &mut self.pos)?;
                    self.warn_unknown_keys(&attrs, l, c);
                }
            }
            let t = self
                .peek()
                .ok_or_else(|| self.err_here("unterminated port list"))?;
            let decl = match (t.kind, t.text.as_str()) {
                (TokenKind::Keyword, "input" | "output" | "inout") => {
                    let direction = match t.text.as_str() {
                        "input" => Direction::Input,
                        "output" => Direction::Output,
                        _ => Direction::Inout,
                    };
                    self.bump();
                    // `output reg`/`output wire` style net types
                    if let Some(t) = self.peek() {
                        if t.kind == TokenKind::Ident && (t.text == "wire" || t.text == "reg") {
                            self.bump();
                        }
                    }
                    let signed = if self.peek().map(|t| t.is_keyword("signed")) == Some(true) {
                        self.bump();
                        true
                    } else {
                        false
                    };
                    let range = self.parse_range()?;
                    let name_tok = self.expect_ident("port name")?;
                    last_sig = Some((direction, signed, range));
                    PortDecl {
                        name: name_tok.text.clone(),
                        direction,
                        range,
                        signed,
                        attrs,
                        line: name_tok.line,
                        col: name_tok.col,
                    }
                }
                (TokenKind::Ident, _) => {
                    let (direction, signed, range) = last_sig.ok_or_else(|| {
                        self.err_here(format!(
                            "non-ANSI port list is not supported (port '{}' in module '{}' has no direction)",
                            t.text, module_name
                        ))
                    })?;
                    let name_tok = self.bump().unwrap();
                    PortDecl {
                        name: name_tok.text.clone(),
                        direction,
                        range,
                        signed,
                        attrs,
                        line: name_tok.line,
                        col: name_tok.col,
                    }
                }
                _ => {
                    return Err(self.err_here(format!(
                        "malformed port declaration in module '{module_name}'"
                    )));
                }
            };
            if ports.iter().any(|p| p.name == decl.name) {
                return Err(Error::parse(
                    decl.line,
                    decl.col,
                    format!(
                        "duplicate port name '{}' in module '{module_name}'",
                        decl.name
                    ),
                ));
            }
            ports.push(decl);
            match self.peek() {
                Some(t) if t.is_punct(",") => {
                    self.bump();
                    // trailing comma before ')' is tolerated
                }
                Some(t) if t.is_punct(")") => {}
                _ => return Err(self.err_here("expected ',' or ')' in port list")),
            }
        }
        Ok(ports)
    }

    /// Cursor on the module-name identifier of an instantiation.
    /// Collects `` `AUTOMATIC_* `` uses from the connection list.
    fn parse_instantiation(
        &mut self,
        attrs: AttributeSet,
    ) -> Result<(String, String, AttributeSet, bool, u32, u32)> {
        let mod_tok = self.expect_ident("module name")?;
        let (line, col) = (mod_tok.line, mod_tok.col);
        if self.peek().map(|t| t.is_punct("#")) == Some(true) {
            self.bump();
            self.skip_parens()?;
        }
        let inst_tok = self.expect_ident("instance name")?;
        let instance_name = inst_tok.text.clone();
        let missing_semi = || {
            Error::parse(
                line,
                col,
                format!("instantiation '{}' has no closing ';'", instance_name),
            )
        };
        if self.peek().map(|t| t.is_punct("(")) != Some(true) {
            return Err(self.err_here("expected '(' in instantiation"));
        }
        self.bump();
        let mut depth = 1i32;
        let mut has_macro = false;
        let auto_name = format!("AUTOMATIC_{instance_name}");
        while depth > 0 {
            match self.bump() {
                Some(t) if t.is_punct("(") || t.kind == TokenKind::AttrOpen => depth += 1,
                Some(t) if t.is_punct(")") || t.kind == TokenKind::AttrClose => depth -= 1,
                Some(t) if t.kind == TokenKind::MacroUse => {
                    if t.macro_name() == auto_name {
                        has_macro = true;
                    }
                }
                Some(_) => {}
                None => return Err(missing_semi()),
            }
        }
        match self.peek() {
            Some(t) if t.is_punct(";") => {
                self.bump();
            }
            _ => return Err(missing_semi()),
        }
        Ok((
            mod_tok.text.clone(),
            inst_tok.text.clone(),
            attrs,
            has_macro,
            line,
            col,
        ))
    }

    fn instance_decl(
        &mut self,
        parts: (String, String, AttributeSet, bool, u32, u32),
    ) -> Result<InstanceDecl> {
        let (module_name, instance_name, attrs, has_automatic_macro, line, col) = parts;
        let gvar = match attrs.entries.iter().find(|(k, _)| k == "gvar") {
            Some((_, Some(v))) => Some(v.clone()),
            Some((_, None)) => {
                return Err(Error::parse(line, col, "gvar attribute requires a value"));
            }
            None => None,
        };
        let gcnt = match attrs.entries.iter().find(|(k, _)| k == "gcnt") {
            Some((_, Some(v))) => {
                let n: u32 = v.parse().map_err(|_| {
                    Error::parse(line, col, format!("gcnt must be a positive integer, got '{v}'"))
                })?;
                if n == 0 {
                    return Err(Error::parse(line, col, "gcnt must be a positive integer"));
                }
                Some(n)
            }
            Some((_, None)) => {
                return Err(Error::parse(line, col, "gcnt attribute requires a value"));
            }
            None => None,
        };
        if gvar.is_some() != gcnt.is_some() {
            return Err(Error::parse(
                line,
                col,
                format!("instance '{instance_name}': gvar and gcnt must be given together"),
            ));
        }
        Ok(InstanceDecl {
            module_name,
            instance_name,
            attrs,
            has_automatic_macro,
            gvar,
            gcnt,
            line,
            col,
        })
    }

    fn parse_module(&mut self) -> Result<Module> {
        let kw = self.bump().unwrap(); // 'module'
        let name = self.expect_ident("module name")?.text.clone();
        if self.peek().map(|t| t.is_punct("#")) == Some(true) {
            self.bump();
            self.skip_parens()?;
        }
        let ports = match self.peek() {
            Some(t) if t.is_punct("(") => {
                self.bump();
                self.parse_port_list(&name)?
            }
            Some(t) if t.is_punct(";") => Vec::new(),
            _ => return Err(self.err_here(format!("expected '(' or ';' after 'module {name}'"))),
        };
        self.expect_punct(";")?;

        let mut instances = Vec::new();
        let mut plain_instances = Vec::new();
        let mut paren_depth = 0i32;
        let mut bracket_depth = 0i32;
        loop {
            let Some(t) = self.peek() else {
                return Err(Error::parse(
                    kw.line,
                    kw.col,
                    format!("module '{name}' has no matching 'endmodule'"),
                ));
            };
            match t.kind {
                TokenKind::Keyword if t.text == "endmodule" && paren_depth == 0 => {
                    self.bump();
                    break;
                }
                TokenKind::Keyword if t.text == "module" => {
                    return Err(Error::parse(
                        t.line,
                        t.col,
                        format!("'module' inside module '{name}' (missing 'endmodule'?)"),
                    ));
                }
                TokenKind::AttrOpen => {
                    let (aline, acol) = (t.line, t.col);
                    let attrs = parse_attributes(self.toks, &mut self.pos)?;
                    let at_statement_level = paren_depth == 0 && bracket_depth == 0;
                    let looks_like_instance = at_statement_level
                        && matches!(self.peek(), Some(t) if t.kind == TokenKind::Ident)
                        && (matches!(self.peek_at(1), Some(t) if t.is_punct("#"))
                            || (matches!(self.peek_at(1), Some(t) if t.kind == TokenKind::Ident)
                                && matches!(self.peek_at(2), Some(t) if t.is_punct("("))));
                    if looks_like_instance {
                        self.warn_unknown_keys(&attrs, aline, acol);
                        let parts = self.parse_instantiation(attrs)?;
                        instances.push(self.instance_decl(parts)?);
                    } else if attrs.has("lb_automatic") {
                        return Err(Error::parse(
                            aline,
                            acol,
                            "expected module instantiation after (* lb_automatic *)",
                        ));
                    }
                    // other attributes in a body belong to synthesis tools
                }
                TokenKind::Ident
                    if paren_depth == 0
                        && bracket_depth == 0
                        && matches!(self.peek_at(1), Some(t) if t.kind == TokenKind::Ident)
                        && matches!(self.peek_at(2), Some(t) if t.is_punct("(")) =>
                {
                    let m = self.bump().unwrap();
                    let i = self.bump().unwrap();
                    plain_instances.push(PlainInstance {
                        module_name: m.text.clone(),
                        instance_name: i.text.clone(),
                        line: m.line,
                        col: m.col,
                    });
                    self.skip_parens()?;
                    if self.peek().map(|t| t.is_punct(";")) == Some(true) {
                        self.bump();
                    }
                }
                TokenKind::Punct => {
                    match t.text.as_str() {
                        "(" => paren_depth += 1,
                        ")" => paren_depth = (paren_depth - 1).max(0),
                        "[" => bracket_depth += 1,
                        "]" => bracket_depth = (bracket_depth - 1).max(0),
                        _ => {}
                    }
                    self.bump();
                }
                _ => {
                    self.bump();
                }
            }
        }
        Ok(Module {
            name,
            ports,
            instances,
            plain_instances,
        })
    }
}

/// Parse one Verilog file. CRLF line endings are normalized to LF first.
pub fn parse_source(text: &str, path: &str) -> Result<SourceUnit> {
    let normalized;
    let text = if text.contains('\r') {
        normalized = text.replace("\r\n", "\n").replace('\r', "\n");
        normalized.as_str()
    } else {
        text
    };
    let toks = tokenize(text).map_err(|e| e.with_path(path))?;
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        path,
        warnings: Vec::new(),
    };
    let mut modules: Vec<Module> = Vec::new();
    while let Some(t) = p.peek() {
        if t.is_keyword("module") {
            let m = p.parse_module().map_err(|e| e.with_path(path))?;
            if modules.iter().any(|x| x.name == m.name) {
                return Err(Error::Parse {
                    path: path.to_string(),
                    line: 1,
                    col: 1,
                    msg: format!("module '{}' defined twice in one file", m.name),
                });
            }
            modules.push(m);
        } else {
            p.bump();
        }
    }
    Ok(SourceUnit {
        path: path.to_string(),
        modules,
        warnings: p.warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::token::tokenize;

    const PRNG: &str = r#"
module prng(
    input clk,
    output [31:0] rnda,
    output [31:0] rndb,
    (* external *)
    input [0:0] run,
    (* external, signal_type="plus-we" *)
    input [31:0] iva,
    input iva_we, // special trailing_we
);
assign rnda = 0;
assign rndb = 0;
endmodule
"#;

    fn attrs_of(src: &str) -> AttributeSet {
        let toks = tokenize(src).unwrap();
        let mut pos = 0;
        let set = parse_attributes(&toks, &mut pos).unwrap();
        assert_eq!(pos, toks.len(), "cursor must end past *)");
        set
    }

    #[test]
    fn bare_attribute() {
        let set = attrs_of("(* external *)");
        assert!(set.has("external"));
        assert_eq!(set.get("external"), None);
    }

    #[test]
    fn valued_attribute() {
        let set = attrs_of(r#"(* external, signal_type="plus-we" *)"#);
        assert_eq!(
            set.entries,
            alloc::vec![
                (String::from("external"), None),
                (String::from("signal_type"), Some(String::from("plus-we"))),
            ]
        );
    }

    #[test]
    fn empty_attribute_set() {
        assert!(attrs_of("(* *)").is_empty());
    }

    #[test]
    fn integer_attribute_value() {
        let set = attrs_of(r#"(* lb_automatic, gvar="i", gcnt=4 *)"#);
        assert_eq!(set.get("gcnt"), Some("4"));
        assert_eq!(set.get("gvar"), Some("i"));
    }

    #[test]
    fn duplicate_key_is_error() {
        let toks = tokenize("(* external, external *)").unwrap();
        let mut pos = 0;
        let err = parse_attributes(&toks, &mut pos).unwrap_err();
        assert!(err.to_string().contains("duplicate attribute key"));
    }

    #[test]
    fn identifier_value_is_error() {
        let toks = tokenize("(* cd=dsp *)").unwrap();
        let mut pos = 0;
        assert!(parse_attributes(&toks, &mut pos).is_err());
    }

    #[test]
    fn missing_close_is_error() {
        let toks = tokenize("(* external").unwrap();
        let mut pos = 0;
        let err = parse_attributes(&toks, &mut pos).unwrap_err();
        assert!(err.to_string().contains("missing `*)`"));
    }

    #[test]
    fn prng_module_ports() {
        let unit = parse_source(PRNG, "prng.v").unwrap();
        assert_eq!(unit.modules.len(), 1);
        let m = &unit.modules[0];
        assert_eq!(m.name, "prng");
        let names: Vec<&str> = m.ports.iter().map(|p| p.name.as_str()).collect();
        assert_eq!(names, ["clk", "rnda", "rndb", "run", "iva", "iva_we"]);
        let run = m.port("run").unwrap();
        assert_eq!(run.width(), 1);
        assert_eq!(run.direction, Direction::Input);
        assert!(run.attrs.has("external"));
        let iva = m.port("iva").unwrap();
        assert_eq!(iva.width(), 32);
        assert_eq!(iva.attrs.get("signal_type"), Some("plus-we"));
        let iva_we = m.port("iva_we").unwrap();
        assert_eq!(iva_we.width(), 1);
        assert!(iva_we.attrs.is_empty());
        let rnda = m.port("rnda").unwrap();
        assert_eq!(rnda.direction, Direction::Output);
        assert_eq!(rnda.width(), 32);
    }

    #[test]
    fn degenerate_module() {
        let unit = parse_source("module m(); endmodule", "m.v").unwrap();
        let m = &unit.modules[0];
        assert_eq!(m.name, "m");
        assert!(m.ports.is_empty());
        assert!(m.instances.is_empty());
    }

    #[test]
    fn attributed_instantiation() {
        let src = r#"
module station(input clk);
(* lb_automatic *)
prng prng (
    .clk(clk),
    .rnda(rnda),
    .rndb(rndb)
    `AUTOMATIC_prng
);
endmodule
"#;
        let unit = parse_source(src, "station.v").unwrap();
        let m = &unit.modules[0];
        assert_eq!(m.instances.len(), 1);
        let inst = &m.instances[0];
        assert_eq!(inst.module_name, "prng");
        assert_eq!(inst.instance_name, "prng");
        assert!(inst.attrs.has("lb_automatic"));
        assert!(inst.has_automatic_macro);
        assert_eq!(inst.gvar, None);
        assert_eq!(inst.gcnt, None);
    }

    #[test]
    fn replicated_instantiation() {
        let src = r#"
module top(input clk);
(* lb_automatic, gvar="i", gcnt=4 *)
leaf ch (.clk(clk) `AUTOMATIC_ch);
endmodule
"#;
        let unit = parse_source(src, "top.v").unwrap();
        let inst = &unit.modules[0].instances[0];
        assert_eq!(inst.gvar.as_deref(), Some("i"));
        assert_eq!(inst.gcnt, Some(4));
    }

    #[test]
    fn gcnt_without_gvar_is_error() {
        let src = "module t(input c);\n(* lb_automatic, gcnt=2 *)\nleaf l (.c(c));\nendmodule";
        assert!(parse_source(src, "t.v").is_err());
    }

    #[test]
    fn body_filler_is_skipped() {
        let src = r#"
module m(
    (* external *)
    input [7:0] x
);
reg [3:0] state;
always @(posedge clk) begin
    if (state == 4'd3) begin
        state <= 0;
    end else begin
        state <= state + 1;
    end
end
assign y = (a + b) * c;
function [7:0] clip;
    input [8:0] v;
    begin
        clip = v[8] ? 8'hff : v[7:0];
    end
endfunction
endmodule
"#;
        let unit = parse_source(src, "m.v").unwrap();
        let m = &unit.modules[0];
        assert_eq!(m.ports.len(), 1);
        assert!(m.instances.is_empty());
    }

    #[test]
    fn plain_instantiation_recorded_separately() {
        let src = "module m(input c);\nleaf u0 (.c(c));\nendmodule";
        let unit = parse_source(src, "m.v").unwrap();
        let m = &unit.modules[0];
        assert!(m.instances.is_empty());
        assert_eq!(m.plain_instances.len(), 1);
        assert_eq!(m.plain_instances[0].module_name, "leaf");
    }

    #[test]
    fn missing_endmodule() {
        let err = parse_source("module m(input c);\nassign x = 1;", "m.v").unwrap_err();
        assert!(err.to_string().contains("no matching 'endmodule'"));
    }

    #[test]
    fn instantiation_without_semicolon() {
        let src = "module m(input c);\n(* lb_automatic *)\nleaf u0 (.c(c))\nendmodule";
        let err = parse_source(src, "m.v").unwrap_err();
        assert!(err.to_string().contains("no closing ';'"), "{err}");
    }

    #[test]
    fn lb_automatic_without_instantiation() {
        let src = "module m(input c);\n(* lb_automatic *)\nassign x = 1;\nendmodule";
        let err = parse_source(src, "m.v").unwrap_err();
        assert!(err.to_string().contains("expected module instantiation"));
    }

    #[test]
    fn non_ansi_header_is_error() {
        let err = parse_source("module m(a, b);\ninput a;\nendmodule", "m.v").unwrap_err();
        assert!(err.to_string().contains("non-ANSI"));
    }

    #[test]
    fn unknown_attr_key_warns() {
        let src = "module m(\n(* external, shiny *) input x\n);\nendmodule";
        let unit = parse_source(src, "m.v").unwrap();
        assert_eq!(unit.warnings.len(), 1);
        assert!(unit.warnings[0].contains("shiny"));
    }

    #[test]
    fn crlf_normalized() {
        let src = "module m(\r\n  input x\r\n);\r\nendmodule\r\n";
        let unit = parse_source(src, "m.v").unwrap();
        assert_eq!(unit.modules[0].ports.len(), 1);
    }

    #[test]
    fn attribute_binds_to_next_port_only() {
        let src = "module m(\n(* external *) input [3:0] a,\ninput [3:0] b\n);\nendmodule";
        let unit = parse_source(src, "m.v").unwrap();
        let m = &unit.modules[0];
        assert!(m.port("a").unwrap().attrs.has("external"));
        assert!(m.port("b").unwrap().attrs.is_empty());
    }
}

#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "tyche/ast.hpp"
#include "tyche/lexer.hpp"

namespace tyche::dsl {

/// Builds the AST and resolves device bindings and handler references.
///
/// Grammar:
///   app       := 'app' STRING decl*
///   decl      := riskAnnot inputDecl | inputDecl | subscribe | handler
///   riskAnnot := 'lowRiskRequest' | 'medRiskRequest' | 'highRiskRequest'
///   inputDecl := 'input' STRING ',' STRING          // binding, "capability.<name>"
///   subscribe := 'subscribe' '(' IDENT ',' STRING ',' IDENT ')'
///   handler   := 'def' IDENT '(' 'evt' ')' block
///   block     := '{' stmt* '}'
///   stmt      := IDENT '.' IDENT '(' (operand (',' operand)*)? ')'
///              | 'if' '(' expr ')' block ('else' block)?
///              | 'log' '(' expr ')'
///   expr      := operand (('==' | '!=' | '<' | '>') operand)?
///   operand   := STRING | NUMBER | 'evt' '.' 'value' | IDENT '.' 'current'<Attr>
///
/// Unannotated inputs are accepted here; check_annotations() rejects them.
AppAst parse(std::span<const Token> tokens);

/// tokenize() followed by parse().
AppAst parse_source(std::string_view source);

/// One request per input, in source order. Throws MissingAnnotation at the
/// first input statement that has no risk modifier.
std::vector<PermissionRequest> check_annotations(const AppAst& ast);

}  // namespace tyche::dsl

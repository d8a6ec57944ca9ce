/*
 * Copyright 2026 The boundql Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "boundql/query.h"

#include <cctype>

#include "boundql/catalog.h"
#include "boundql/error.h"
#include "lexer.h"

namespace boundql {

using detail::Token;
using detail::TokenKind;
using detail::TokenStream;

std::string ParamRef::toString() const {
  std::string s = "[" + std::to_string(ordinal) + ": " + name;
  if (maxItems) s += " MAX " + std::to_string(*maxItems);
  return s + "]";
}

std::string Operand::toString() const {
  switch (kind) {
    case Kind::kLiteral:
      return literal.toLiteral();
    case Kind::kParam:
      return param.toString();
    case Kind::kColumn:
      return column.toString();
  }
  return {};
}

std::string_view toString(PredicateKind kind) {
  switch (kind) {
    case PredicateKind::kEquality:
      return "AttributeEquality";
    case PredicateKind::kInequality:
      return "AttributeInequality";
    case PredicateKind::kTokenMatch:
      return "TokenMatch";
    case PredicateKind::kJoinEquality:
      return "JoinEquality";
    case PredicateKind::kInList:
      return "InList";
  }
  return "?";
}

std::string_view toString(CompareOp op) {
  switch (op) {
    case CompareOp::kEq:
      return "=";
    case CompareOp::kLt:
      return "<";
    case CompareOp::kLe:
      return "<=";
    case CompareOp::kGt:
      return ">";
    case CompareOp::kGe:
      return ">=";
  }
  return "?";
}

CompareOp flip(CompareOp op) {
  switch (op) {
    case CompareOp::kLt:
      return CompareOp::kGt;
    case CompareOp::kLe:
      return CompareOp::kGe;
    case CompareOp::kGt:
      return CompareOp::kLt;
    case CompareOp::kGe:
      return CompareOp::kLe;
    default:
      return op;
  }
}

std::string Predicate::toString() const {
  switch (kind) {
    case PredicateKind::kTokenMatch:
      if (rhs.kind == Operand::Kind::kLiteral)
        return lhs.toString() + " LIKE " + Value::string("%" + rhs.literal.asString() + "%").toLiteral();
      return lhs.toString() + " LIKE " + rhs.toString();
    case PredicateKind::kInList:
      return lhs.toString() + " IN " + rhs.toString();
    default:
      return lhs.toString() + " " + std::string(boundql::toString(op)) + " " + rhs.toString();
  }
}

std::string_view toString(AggregateFn fn) {
  switch (fn) {
    case AggregateFn::kCount:
      return "COUNT";
    case AggregateFn::kSum:
      return "SUM";
    case AggregateFn::kMin:
      return "MIN";
    case AggregateFn::kMax:
      return "MAX";
  }
  return "?";
}

std::string Projection::toString() const {
  switch (kind) {
    case Kind::kStar:
      return "*";
    case Kind::kTableStar:
      return column.qualifier + ".*";
    case Kind::kColumn:
      return column.toString();
    case Kind::kAggregate:
      return std::string(boundql::toString(fn)) + "(" + (countStar ? "*" : column.toString()) + ")";
  }
  return {};
}

std::string_view toString(StopKind kind) { return kind == StopKind::kLimit ? "limit" : "paginate"; }

bool QueryAst::hasAggregates() const {
  for (const auto& p : projections)
    if (p.kind == Projection::Kind::kAggregate) return true;
  return !groupBy.empty();
}

namespace {

constexpr std::string_view kClauseWords[] = {"WHERE", "ORDER", "GROUP", "LIMIT", "PAGINATE",
                                             "AND",   "OR",    "AS",    "ON",    "JOIN"};

bool isClauseWord(const Token& t) {
  if (t.kind != TokenKind::kIdent) return false;
  for (auto w : kClauseWords)
    if (iequals(t.text, w)) return true;
  return false;
}

class QueryParser {
 public:
  explicit QueryParser(TokenStream& ts) : ts_(ts) {}

  QueryAst parse() {
    QueryAst ast;
    ts_.expectKeyword("SELECT");
    if (ts_.isKeyword("DISTINCT")) ts_.fail("DISTINCT is not supported");
    do {
      ast.projections.push_back(projection());
    } while (ts_.acceptSymbol(","));
    ts_.expectKeyword("FROM");
    do {
      if (ts_.isSymbol("(")) ts_.fail("subqueries are not supported");
      TableRef ref;
      ref.table = ts_.expectIdent("table name");
      if (ts_.acceptKeyword("AS")) {
        ref.alias = ts_.expectIdent("table alias");
      } else if (ts_.peek().kind == TokenKind::kIdent && !isClauseWord(ts_.peek())) {
        ref.alias = ts_.next().text;
      }
      ast.relations.push_back(std::move(ref));
    } while (ts_.acceptSymbol(","));
    if (ts_.isKeyword("JOIN")) ts_.fail("explicit JOIN syntax is not supported; list tables in FROM");
    if (ts_.acceptKeyword("WHERE")) {
      do {
        ast.predicates.push_back(predicate());
      } while (ts_.acceptKeyword("AND"));
      if (ts_.isKeyword("OR")) ts_.fail("disjunction (OR) is not supported");
    }
    if (ts_.acceptKeyword("GROUP")) {
      ts_.expectKeyword("BY");
      do {
        ast.groupBy.push_back(columnRef());
      } while (ts_.acceptSymbol(","));
    }
    if (ts_.acceptKeyword("ORDER")) {
      ts_.expectKeyword("BY");
      do {
        OrderKey key{columnRef(), false};
        if (ts_.acceptKeyword("DESC")) {
          key.descending = true;
        } else {
          ts_.acceptKeyword("ASC");
        }
        ast.ordering.push_back(std::move(key));
      } while (ts_.acceptSymbol(","));
    }
    while (ts_.isKeyword("LIMIT") || ts_.isKeyword("PAGINATE")) {
      if (ast.limit) ts_.fail("LIMIT and PAGINATE are mutually exclusive");
      LimitClause lc;
      lc.kind = iequals(ts_.next().text, "LIMIT") ? StopKind::kLimit : StopKind::kPaginate;
      const Token& at = ts_.peek();
      lc.count = ts_.expectInteger("row count");
      if (lc.count < 1) TokenStream::fail("row count must be at least 1", at);
      ast.limit = lc;
    }
    if (ts_.isKeyword("OFFSET")) ts_.fail("OFFSET is not supported; use PAGINATE");
    return ast;
  }

 private:
  Projection projection() {
    Projection p;
    if (ts_.acceptSymbol("*")) return p;
    for (auto fn : {AggregateFn::kCount, AggregateFn::kSum, AggregateFn::kMin, AggregateFn::kMax}) {
      if (ts_.isKeyword(toString(fn)) && ts_.isSymbol("(", 1)) {
        ts_.next();
        ts_.next();
        p.kind = Projection::Kind::kAggregate;
        p.fn = fn;
        if (fn == AggregateFn::kCount && ts_.acceptSymbol("*")) {
          p.countStar = true;
        } else {
          p.column = columnRef();
        }
        ts_.expectSymbol(")");
        return p;
      }
    }
    std::string first = ts_.expectIdent("column name");
    if (ts_.acceptSymbol(".")) {
      if (ts_.acceptSymbol("*")) {
        p.kind = Projection::Kind::kTableStar;
        p.column.qualifier = first;
        return p;
      }
      p.kind = Projection::Kind::kColumn;
      p.column = {first, ts_.expectIdent("column name")};
      return p;
    }
    p.kind = Projection::Kind::kColumn;
    p.column = {"", first};
    return p;
  }

  ColumnRef columnRef() {
    std::string first = ts_.expectIdent("column name");
    if (ts_.acceptSymbol(".")) return {first, ts_.expectIdent("column name")};
    return {"", first};
  }

  ParamRef param() {
    ts_.expectSymbol("[");
    ParamRef p;
    const Token& at = ts_.peek();
    p.ordinal = static_cast<int>(ts_.expectInteger("parameter ordinal"));
    if (p.ordinal < 1) TokenStream::fail("parameter ordinal must be at least 1", at);
    ts_.expectSymbol(":");
    p.name = ts_.expectIdent("parameter name");
    if (ts_.acceptKeyword("MAX")) {
      const Token& m = ts_.peek();
      p.maxItems = ts_.expectInteger("list length");
      if (*p.maxItems < 1) TokenStream::fail("list length must be at least 1", m);
    }
    ts_.expectSymbol("]");
    return p;
  }

  Operand operand() {
    const Token& t = ts_.peek();
    if (ts_.isSymbol("(")) ts_.fail("subqueries and parenthesized expressions are not supported");
    if (ts_.isSymbol("[")) {
      ParamRef p = param();
      if (p.maxItems) TokenStream::fail("MAX applies only to IN-list parameters", t);
      return Operand::ofParam(std::move(p));
    }
    if (t.kind == TokenKind::kInteger) return Operand::ofLiteral(Value::int64(ts_.next().integer));
    if (ts_.isSymbol("-") && ts_.peek(1).kind == TokenKind::kInteger) {
      ts_.next();
      return Operand::ofLiteral(Value::int64(-ts_.next().integer));
    }
    if (t.kind == TokenKind::kString) return Operand::ofLiteral(Value::string(ts_.next().text));
    if (ts_.acceptKeyword("TRUE")) return Operand::ofLiteral(Value::boolean(true));
    if (ts_.acceptKeyword("FALSE")) return Operand::ofLiteral(Value::boolean(false));
    if (t.kind == TokenKind::kIdent) return Operand::ofColumn(columnRef());
    ts_.fail("expected column, literal or parameter, found " + detail::describe(t));
  }

  Predicate predicate() {
    const Token& start = ts_.peek();
    if (ts_.isKeyword("NOT")) ts_.fail("negation is not supported");
    if (ts_.isSymbol("(")) ts_.fail("parenthesized conditions are not supported");
    Operand left = operand();
    Predicate p;
    if (ts_.isKeyword("LIKE")) {
      ts_.next();
      if (left.kind != Operand::Kind::kColumn) TokenStream::fail("LIKE needs a column on the left", start);
      p.kind = PredicateKind::kTokenMatch;
      p.lhs = left.column;
      const Token& pat = ts_.peek();
      if (ts_.isSymbol("[")) {
        p.rhs = Operand::ofParam(param());
        if (p.rhs.param.maxItems) TokenStream::fail("MAX applies only to IN-list parameters", pat);
        return p;
      }
      if (pat.kind != TokenKind::kString) ts_.fail("LIKE expects a '%word%' pattern or a parameter");
      std::string text = ts_.next().text;
      bool ok = text.size() > 2 && text.front() == '%' && text.back() == '%';
      std::string word = ok ? text.substr(1, text.size() - 2) : std::string();
      for (char c : word)
        if (!std::isalnum(static_cast<unsigned char>(c))) ok = false;
      if (!ok)
        TokenStream::fail("only single-word '%word%' LIKE patterns are supported; general patterns are not scale-independent",
                          pat);
      p.rhs = Operand::ofLiteral(Value::string(word));
      return p;
    }
    if (ts_.isKeyword("IN")) {
      ts_.next();
      if (left.kind != Operand::Kind::kColumn) TokenStream::fail("IN needs a column on the left", start);
      const Token& at = ts_.peek();
      if (ts_.isSymbol("(")) ts_.fail("IN expects a list parameter [k: name MAX n]");
      p.kind = PredicateKind::kInList;
      p.lhs = left.column;
      p.rhs = Operand::ofParam(param());
      if (!p.rhs.param.maxItems) TokenStream::fail("IN-list parameter must declare MAX n", at);
      return p;
    }
    const Token& opTok = ts_.peek();
    if (ts_.isSymbol("<>") || ts_.isSymbol("!=")) TokenStream::fail("not-equal predicates are not supported", opTok);
    CompareOp op;
    if (ts_.acceptSymbol("=")) {
      op = CompareOp::kEq;
    } else if (ts_.acceptSymbol("<")) {
      op = CompareOp::kLt;
    } else if (ts_.acceptSymbol("<=")) {
      op = CompareOp::kLe;
    } else if (ts_.acceptSymbol(">")) {
      op = CompareOp::kGt;
    } else if (ts_.acceptSymbol(">=")) {
      op = CompareOp::kGe;
    } else {
      ts_.fail("expected comparison operator, found " + detail::describe(opTok));
    }
    Operand right = operand();
    if (left.kind != Operand::Kind::kColumn) {
      if (right.kind != Operand::Kind::kColumn) TokenStream::fail("predicate must reference a column", start);
      std::swap(left, right);
      op = flip(op);
    }
    p.lhs = left.column;
    p.op = op;
    p.rhs = std::move(right);
    if (p.rhs.kind == Operand::Kind::kColumn) {
      if (op != CompareOp::kEq) TokenStream::fail("column-to-column comparisons must be equalities", opTok);
      p.kind = PredicateKind::kJoinEquality;
    } else {
      p.kind = op == CompareOp::kEq ? PredicateKind::kEquality : PredicateKind::kInequality;
    }
    return p;
  }

  TokenStream& ts_;
};

}  // namespace

QueryAst parseQuery(std::string_view source) {
  TokenStream ts(detail::lex(source));
  QueryAst ast = QueryParser(ts).parse();
  ts.acceptSymbol(";");
  if (!ts.atEnd()) ts.fail("unexpected " + detail::describe(ts.peek()) + " after end of query");
  return ast;
}

std::vector<QueryAst> parseQueries(std::string_view source) {
  TokenStream ts(detail::lex(source));
  std::vector<QueryAst> out;
  while (!ts.atEnd()) {
    if (ts.acceptSymbol(";")) continue;
    out.push_back(QueryParser(ts).parse());
    if (!ts.atEnd()) ts.expectSymbol(";");
  }
  return out;
}

std::string renderQuery(const QueryAst& ast) {
  std::string s = "SELECT ";
  for (std::size_t i = 0; i < ast.projections.size(); ++i)
    s += (i ? ", " : "") + ast.projections[i].toString();
  s += " FROM ";
  for (std::size_t i = 0; i < ast.relations.size(); ++i) {
    s += (i ? ", " : "") + ast.relations[i].table;
    if (!ast.relations[i].alias.empty()) s += " " + ast.relations[i].alias;
  }
  for (std::size_t i = 0; i < ast.predicates.size(); ++i)
    s += (i ? " AND " : " WHERE ") + ast.predicates[i].toString();
  for (std::size_t i = 0; i < ast.groupBy.size(); ++i)
    s += (i ? ", " : " GROUP BY ") + ast.groupBy[i].toString();
  for (std::size_t i = 0; i < ast.ordering.size(); ++i)
    s += (i ? ", " : " ORDER BY ") + ast.ordering[i].column.toString() +
         (ast.ordering[i].descending ? " DESC" : "");
  if (ast.limit)
    s += std::string(ast.limit->kind == StopKind::kLimit ? " LIMIT " : " PAGINATE ") +
         std::to_string(ast.limit->count);
  return s;
}

Params& Params::set(std::string name, Value value) {
  values_[std::move(name)] = {false, {std::move(value)}};
  return *this;
}

Params& Params::setList(std::string name, std::vector<Value> values) {
  values_[std::move(name)] = {true, std::move(values)};
  return *this;
}

bool Params::isList(std::string_view name) const {
  auto it = values_.find(name);
  return it != values_.end() && it->second.first;
}

const std::vector<Value>& Params::get(std::string_view name) const {
  auto it = values_.find(name);
  if (it == values_.end()) throw QueryError("unbound parameter '" + std::string(name) + "'");
  return it->second.second;
}

}  // namespace boundql

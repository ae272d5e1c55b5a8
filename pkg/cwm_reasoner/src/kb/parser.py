"""
知识库文本解析器

按行解析 .kb 文件与查询文本：
- 声明：concept / role / individual 名字列表
- 严格包含：C <= D
- 带权典型性包含：T(A) <= D @ 权重
- 断言：A(a)、r(a, b)、(C)(a)
- 注释：# 至行尾

解析是全函数：任何输入要么得到知识库，要么得到带位置的诊断（KbParseError）。
"""

import logging
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from ..core.exceptions import KbParseError
from .model import (
    WEIGHT_MAX, WEIGHT_MIN,
    Atomic, Bot, Conj, ConceptAssertion, ConceptExpr, Diagnostic, Exists,
    KnowledgeBase, Nominal, Query, RoleAssertion, Signature, SourceSpan,
    StrictAxiom, Top, WeightedInclusion, iter_subconcepts,
)

logger = logging.getLogger(__name__)

DIGITS = frozenset("0123456789")
RESERVED_WORDS = frozenset({"concept", "role", "individual", "and", "exists", "Top", "Bot", "T"})
# 概念表达式的最大嵌套深度（括号、exists 与 and 各计一层）
MAX_CONCEPT_DEPTH = 100


class TokenType(Enum):
    """Token类型"""
    NAME = 'name'
    INT = 'int'
    KEYWORD = 'keyword'
    SUBSUMED = 'subsumed'       # <=
    LPAREN = 'lparen'
    RPAREN = 'rparen'
    LBRACE = 'lbrace'
    RBRACE = 'rbrace'
    COMMA = 'comma'
    DOT = 'dot'
    AT = 'at'
    EOL = 'eol'


class Token:
    """Token类"""

    def __init__(self, token_type: TokenType, value: str, span: SourceSpan):
        self.token_type = token_type
        self.value = value
        self.span = span

    def __repr__(self):
        return f"Token({self.token_type.value}, '{self.value}', {self.span})"


class ParseFailure(Exception):
    """单行解析失败（内部使用，由解析器转换为诊断）。"""

    def __init__(self, message: str, span: SourceSpan, code: str = "syntax"):
        super().__init__(message)
        self.diagnostic = Diagnostic(code, message, span)


def _is_name_char(char: str) -> bool:
    return char.isascii() and (char.isalnum() or char == '_')


_SINGLE_CHAR_TOKENS = {
    '(': TokenType.LPAREN,
    ')': TokenType.RPAREN,
    '{': TokenType.LBRACE,
    '}': TokenType.RBRACE,
    ',': TokenType.COMMA,
    '.': TokenType.DOT,
    '@': TokenType.AT,
}


class KbLexer:
    """按行的词法分析器"""

    def tokenize_line(self, text: str, line_no: int) -> List[Token]:
        """词法分析一行文本，注释被丢弃，末尾追加EOL。"""
        tokens: List[Token] = []
        position = 0
        while position < len(text):
            char = text[position]
            span = SourceSpan(line_no, position + 1)
            if char.isspace():
                position += 1
                continue
            if char == '#':
                break
            if char == '<':
                if text.startswith('<=', position):
                    tokens.append(Token(TokenType.SUBSUMED, '<=', span))
                    position += 2
                    continue
                raise ParseFailure("期望 '<='", span)
            # 整数（允许负号）
            if char in DIGITS or (char == '-' and position + 1 < len(text) and text[position + 1] in DIGITS):
                start = position
                position += 1
                while position < len(text) and text[position] in DIGITS:
                    position += 1
                tokens.append(Token(TokenType.INT, text[start:position], span))
                continue
            if char.isascii() and (char.isalpha() or char == '_'):
                start = position
                while position < len(text) and _is_name_char(text[position]):
                    position += 1
                word = text[start:position]
                token_type = TokenType.KEYWORD if word in RESERVED_WORDS else TokenType.NAME
                tokens.append(Token(token_type, word, span))
                continue
            if char in _SINGLE_CHAR_TOKENS:
                tokens.append(Token(_SINGLE_CHAR_TOKENS[char], char, span))
                position += 1
                continue
            raise ParseFailure(f"未知字符: {char!r}", span)
        tokens.append(Token(TokenType.EOL, '', SourceSpan(line_no, len(text) + 1)))
        return tokens


class _LineParser:
    """单行语法分析器（递归下降）"""

    def __init__(self, tokens: List[Token]):
        self.tokens = tokens
        self.current_position = 0
        self.depth = 0

    def _enter(self, token: Token) -> None:
        self.depth += 1
        if self.depth > MAX_CONCEPT_DEPTH:
            raise ParseFailure(f"概念嵌套超过 {MAX_CONCEPT_DEPTH} 层", token.span, "nesting-depth")

    def current(self) -> Token:
        return self.tokens[self.current_position]

    def peek(self, offset: int = 1) -> Token:
        pos = min(self.current_position + offset, len(self.tokens) - 1)
        return self.tokens[pos]

    def advance(self) -> Token:
        token = self.tokens[self.current_position]
        if token.token_type != TokenType.EOL:
            self.current_position += 1
        return token

    def match(self, expected_type: TokenType, expected_value: Optional[str] = None) -> Token:
        token = self.current()
        if token.token_type == expected_type and (expected_value is None or token.value == expected_value):
            return self.advance()
        want = expected_value or expected_type.value
        got = token.value or token.token_type.value
        raise ParseFailure(f"期望 {want}，但得到 {got}", token.span)

    def at(self, token_type: TokenType, value: Optional[str] = None) -> bool:
        token = self.current()
        return token.token_type == token_type and (value is None or token.value == value)

    def expect_end(self) -> None:
        if not self.at(TokenType.EOL):
            token = self.current()
            raise ParseFailure(f"多余的输入: {token.value}", token.span)

    def has_subsumption(self) -> bool:
        return any(t.token_type == TokenType.SUBSUMED for t in self.tokens)

    # concept := unary ("and" unary)*   （右结合）
    def parse_concept(self) -> ConceptExpr:
        first = self.parse_unary()
        if self.at(TokenType.KEYWORD, 'and'):
            and_token = self.advance()
            self._enter(and_token)
            rest = self.parse_concept()
            self.depth -= 1
            return Conj(first, rest, span=and_token.span)
        return first

    # unary := Top | Bot | NAME | "{" NAME "}" | "(" concept ")" | "exists" NAME "." unary
    def parse_unary(self) -> ConceptExpr:
        token = self.current()
        if token.token_type == TokenType.KEYWORD and token.value == 'Top':
            self.advance()
            return Top(span=token.span)
        if token.token_type == TokenType.KEYWORD and token.value == 'Bot':
            self.advance()
            return Bot(span=token.span)
        if token.token_type == TokenType.NAME:
            self.advance()
            return Atomic(token.value, span=token.span)
        if token.token_type == TokenType.LBRACE:
            self.advance()
            name = self.match(TokenType.NAME)
            self.match(TokenType.RBRACE)
            return Nominal(name.value, span=token.span)
        if token.token_type == TokenType.LPAREN:
            self.advance()
            self._enter(token)
            inner = self.parse_concept()
            self.match(TokenType.RPAREN)
            self.depth -= 1
            return inner
        if token.token_type == TokenType.KEYWORD and token.value == 'exists':
            self.advance()
            role = self.match(TokenType.NAME)
            self.match(TokenType.DOT)
            self._enter(token)
            filler = self.parse_unary()
            self.depth -= 1
            return Exists(role.value, filler, span=token.span)
        raise ParseFailure(f"期望概念，但得到 {token.value or token.token_type.value}", token.span)

    def parse_typicality_subject(self) -> ConceptExpr:
        """解析 T( concept )，返回括号内的概念。"""
        self.match(TokenType.KEYWORD, 'T')
        self.match(TokenType.LPAREN)
        subject = self.parse_concept()
        self.match(TokenType.RPAREN)
        return subject

    def parse_namelist(self) -> List[Token]:
        names = [self.match(TokenType.NAME)]
        while not self.at(TokenType.EOL):
            if self.at(TokenType.COMMA):
                self.advance()
            names.append(self.match(TokenType.NAME))
        return names


class KbParser:
    """知识库语法分析器"""

    def __init__(self):
        self.lexer = KbLexer()

    def parse(self, text: str) -> KnowledgeBase:
        """解析完整的知识库文本。"""
        diagnostics: List[Diagnostic] = []
        declared: Dict[str, Tuple[str, SourceSpan]] = {}
        statements: List[Tuple[str, object]] = []

        for line_no, line in enumerate(text.splitlines(), start=1):
            try:
                tokens = self.lexer.tokenize_line(line, line_no)
                if tokens[0].token_type == TokenType.EOL:
                    continue
                self._parse_statement(_LineParser(tokens), declared, statements, diagnostics)
            except ParseFailure as failure:
                diagnostics.append(failure.diagnostic)

        signature = Signature(
            concepts=frozenset(n for n, (kind, _) in declared.items() if kind == 'concept'),
            roles=frozenset(n for n, (kind, _) in declared.items() if kind == 'role'),
            individuals=frozenset(n for n, (kind, _) in declared.items() if kind == 'individual'),
        )

        strict: List[StrictAxiom] = []
        defeasible: Dict[str, List[WeightedInclusion]] = {}
        distinguished: List[str] = []
        abox = []
        for kind, node in statements:
            if kind == 'strict':
                self._check_declared(node.lhs, signature, diagnostics)
                self._check_declared(node.rhs, signature, diagnostics)
                strict.append(node)
            elif kind == 'defeasible':
                if node.subject not in signature.concepts:
                    diagnostics.append(Diagnostic("undeclared-concept", f"概念 '{node.subject}' 未声明", node.span))
                self._check_declared(node.head, signature, diagnostics)
                if node.subject not in defeasible:
                    defeasible[node.subject] = []
                    distinguished.append(node.subject)
                defeasible[node.subject].append(node)
            elif isinstance(node, ConceptAssertion):
                self._check_declared(node.concept, signature, diagnostics)
                if node.individual not in signature.individuals:
                    diagnostics.append(Diagnostic(
                        "undeclared-individual", f"个体 '{node.individual}' 未声明", node.span))
                abox.append(node)
            else:
                if node.role not in signature.roles:
                    diagnostics.append(Diagnostic("undeclared-role", f"角色 '{node.role}' 未声明", node.span))
                for ind in (node.subject, node.object):
                    if ind not in signature.individuals:
                        diagnostics.append(Diagnostic("undeclared-individual", f"个体 '{ind}' 未声明", node.span))
                abox.append(node)

        if diagnostics:
            diagnostics.sort(key=lambda d: (d.span.line, d.span.column) if d.span else (0, 0))
            raise KbParseError(diagnostics)

        kb = KnowledgeBase(
            distinguished=tuple(distinguished),
            strict=tuple(strict),
            defeasible={k: tuple(v) for k, v in defeasible.items()},
            abox=tuple(abox),
            signature=signature,
        )
        logger.debug(f"解析完成: {len(strict)} 条严格公理, {len(distinguished)} 个区分概念, {len(abox)} 条断言")
        return kb

    def _parse_statement(self, p: _LineParser, declared: Dict[str, Tuple[str, SourceSpan]],
                         statements: List[Tuple[str, object]], diagnostics: List[Diagnostic]) -> None:
        first = p.current()
        if first.token_type == TokenType.KEYWORD and first.value in ('concept', 'role', 'individual'):
            p.advance()
            for name in p.parse_namelist():
                if name.value in declared:
                    prev_kind, prev_span = declared[name.value]
                    diagnostics.append(Diagnostic(
                        "duplicate-declaration",
                        f"名字 '{name.value}' 重复声明（首次声明于 {prev_span}，类别 {prev_kind}）",
                        name.span))
                    continue
                declared[name.value] = (first.value, name.span)
            return

        if p.has_subsumption():
            if first.token_type == TokenType.KEYWORD and first.value == 'T':
                subject = p.parse_typicality_subject()
                p.match(TokenType.SUBSUMED)
                head = p.parse_concept()
                if not p.at(TokenType.AT):
                    raise ParseFailure("典型性包含缺少权重 '@ INT'", p.current().span, "missing-weight")
                p.advance()
                weight_token = p.match(TokenType.INT)
                p.expect_end()
                if not isinstance(subject, Atomic):
                    raise ParseFailure("知识库中的典型性主语必须是概念名", first.span)
                weight = int(weight_token.value)
                if not (WEIGHT_MIN <= weight <= WEIGHT_MAX):
                    raise ParseFailure(f"权重 {weight_token.value} 超出64位有符号整数范围",
                                       weight_token.span, "weight-range")
                statements.append(('defeasible', WeightedInclusion(subject.name, head, weight, span=first.span)))
                return
            lhs = p.parse_concept()
            p.match(TokenType.SUBSUMED)
            rhs = p.parse_concept()
            p.expect_end()
            statements.append(('strict', StrictAxiom(lhs, rhs, span=first.span)))
            return

        # 断言
        if first.token_type == TokenType.NAME:
            p.advance()
            p.match(TokenType.LPAREN)
            a = p.match(TokenType.NAME)
            if p.at(TokenType.COMMA):
                p.advance()
                b = p.match(TokenType.NAME)
                p.match(TokenType.RPAREN)
                p.expect_end()
                statements.append(('assert', RoleAssertion(first.value, a.value, b.value, span=first.span)))
                return
            p.match(TokenType.RPAREN)
            p.expect_end()
            statements.append(('assert', ConceptAssertion(Atomic(first.value, span=first.span), a.value,
                                                          span=first.span)))
            return
        if first.token_type == TokenType.LPAREN:
            p.advance()
            concept = p.parse_concept()
            p.match(TokenType.RPAREN)
            p.match(TokenType.LPAREN)
            a = p.match(TokenType.NAME)
            p.match(TokenType.RPAREN)
            p.expect_end()
            statements.append(('assert', ConceptAssertion(concept, a.value, span=first.span)))
            return
        raise ParseFailure(f"无法识别的语句开头: {first.value or first.token_type.value}", first.span)

    @staticmethod
    def _check_declared(c: ConceptExpr, signature: Signature, diagnostics: List[Diagnostic]) -> None:
        for node in iter_subconcepts(c):
            if isinstance(node, Atomic) and node.name not in signature.concepts:
                diagnostics.append(Diagnostic("undeclared-concept", f"概念 '{node.name}' 未声明", node.span))
            elif isinstance(node, Nominal) and node.individual not in signature.individuals:
                diagnostics.append(Diagnostic(
                    "undeclared-individual", f"个体 '{node.individual}' 未声明", node.span))
            elif isinstance(node, Exists) and node.role not in signature.roles:
                diagnostics.append(Diagnostic("undeclared-role", f"角色 '{node.role}' 未声明", node.span))


def parse_kb(text: str) -> KnowledgeBase:
    """便捷函数：解析知识库文本。"""
    return KbParser().parse(text)


def load_kb(path: str) -> KnowledgeBase:
    """读取并解析UTF-8编码的 .kb 文件。"""
    text = Path(path).read_text(encoding="utf-8")
    return parse_kb(text)


def parse_query(text: str) -> Query:
    """解析查询：'T(C) <= D' 为典型性查询，'C <= D' 为严格查询。"""
    lexer = KbLexer()
    lines = [line for line in text.splitlines() if line.strip()] or [""]
    if len(lines) > 1:
        raise KbParseError([Diagnostic("syntax", "查询只能占一行", SourceSpan(2, 1))])
    try:
        p = _LineParser(lexer.tokenize_line(lines[0], 1))
        if p.at(TokenType.EOL):
            raise ParseFailure("空查询", p.current().span)
        if p.at(TokenType.KEYWORD, 'T') and p.peek().token_type == TokenType.LPAREN:
            subject = p.parse_typicality_subject()
            typicality = True
        else:
            subject = p.parse_concept()
            typicality = False
        p.match(TokenType.SUBSUMED)
        obj = p.parse_concept()
        p.expect_end()
    except ParseFailure as failure:
        raise KbParseError([failure.diagnostic]) from None
    return Query(subject, obj, typicality)

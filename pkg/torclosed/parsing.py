"""Value formats accepted on the command line."""
from typing import List, Tuple

from torclosed.errors import ParseError


def parse_int_list(text: str) -> List[int]:
    """'0,1,3' -> [0, 1, 3]"""
    text = text.strip()
    if not text:
        return []
    try:
        return [int(part) for part in text.split(',')]
    except ValueError:
        raise ParseError(f'expected comma-separated integers, got "{text}"')


def parse_name_list(text: str) -> List[str]:
    return [part.strip() for part in text.split(',') if part.strip()]


def parse_os_tuple(text: str) -> Tuple[int, ...]:
    """'0133' -> (0, 1, 3, 3); entries of 10 or more need commas: '0,10,12'."""
    text = text.strip()
    if ',' in text:
        return tuple(parse_int_list(text))
    if not text.isdigit():
        raise ParseError(f'expected a digit string, got "{text}"')
    return tuple(int(c) for c in text)


def parse_word(text: str) -> Tuple[int, ...]:
    """'0102' or '0 1 10 2' -> word entries"""
    text = text.strip()
    if ' ' in text:
        try:
            return tuple(int(part) for part in text.split())
        except ValueError:
            raise ParseError(f'expected space-separated integers, got "{text}"')
    return parse_os_tuple(text)

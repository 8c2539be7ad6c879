"""Regenerate the bundled fixture files in this directory.

    python tests/fixtures/make_fixtures.py

Doc entries carry hand-derived expectations alongside them: the number
of usages (min((p + 1) * 2**q, 10) for p optional positionals and q
keywords; 0 for an unparseable prototype) and the arguments the prose
never names. Those were worked out by hand when the entries were written,
not computed by the package.
"""

import json
import random
from pathlib import Path

HERE = Path(__file__).parent

# (module, kind, owner_class, signature_text, description, usages, unmentioned)
DOC_ENTRIES = [
    ("os", "function", None, "os.getcwd()",
     "Return a string representing the current working directory.", 1, []),
    ("collections", "class", None, "class collections.deque([iterable[, maxlen]])",
     "Returns a new deque object initialized left-to-right with data from iterable. "
     "If iterable is not specified, the new deque is empty.\n\nIf maxlen is not specified "
     "or is None, deques may grow to an arbitrary length.", 3, []),
    ("collections", "method", "deque", "append(x)",
     "Add x to the right side of the deque.", 1, []),
    ("collections", "method", "deque", "appendleft(x)",
     "Add x to the left side of the deque.", 1, []),
    ("collections", "method", "deque", "extend(iterable)",
     "Extend the right side of the deque by appending elements from the iterable argument.", 1, []),
    ("collections", "method", "deque", "rotate(n=1)",
     "Rotate the deque n steps to the right. If n is negative, rotate to the left.", 2, []),
    ("heapq", "function", None, "heapq.nlargest(n, iterable, key=None)",
     "Return a list with the n largest elements from the dataset defined by iterable. "
     "key, if provided, specifies a function of one argument that is used to extract "
     "a comparison key from each element in iterable.", 2, []),
    ("heapq", "function", None, "heapq.nsmallest(n, iterable, key=None)",
     "Return a list with the n smallest elements from the dataset defined by iterable. "
     "key, if provided, specifies a function of one argument that is used to extract "
     "a comparison key from each element in iterable.", 2, []),
    ("heapq", "function", None, "heapq.heappush(heap, item)",
     "Push the value item onto the heap, maintaining the heap invariant.", 1, []),
    ("heapq", "function", None, "heapq.heappop(heap)",
     "Pop and return the smallest item from the heap, maintaining the heap invariant.", 1, []),
    ("random", "function", None, "random.choice(seq)",
     "Return a random element from the non-empty sequence seq. If seq is empty, "
     "raises IndexError.", 1, []),
    ("random", "function", None, "random.randint(a, b)",
     "Return a random integer N such that a <= N <= b.", 1, []),
    ("random", "function", None, "random.sample(population, k)",
     "Return a k length list of unique elements chosen from the population sequence "
     "or set. Used for random sampling without replacement.", 1, []),
    ("random", "function", None, "random.shuffle(x[, random])",
     "Shuffle the sequence x in place. The optional argument random is a 0-argument "
     "function returning a random float in [0.0, 1.0).", 2, []),
    ("os", "function", None, "os.listdir(path='.')",
     "Return a list containing the names of the entries in the directory given by path. "
     "The list is in arbitrary order.", 2, []),
    ("os", "function", None, "os.makedirs(name, mode=0o777, exist_ok=False)",
     "Recursive directory creation function. Like mkdir(), but makes all "
     "intermediate-level directories needed to contain the leaf directory. If exist_ok "
     "is False, an error is raised if the target directory already exists.", 4,
     ["name", "mode"]),
    ("os.path", "function", None, "os.path.join(path, *paths)",
     "Join one or more path components intelligently.", 1, []),
    ("os.path", "function", None, "os.path.exists(path)",
     "Return True if path refers to an existing path or an open file descriptor.", 1, []),
    ("os.path", "function", None, "os.path.splitext(path)",
     "Split the pathname path into a pair (root, ext) such that root + ext == path.", 1, []),
    ("os", "function", None, "os.remove(path, *, dir_fd=None)",
     "Remove (delete) the file path. If path is a directory, an IsADirectoryError is "
     "raised.", 2, ["dir_fd"]),
    ("json", "function", None,
     "json.dumps(obj, *, skipkeys=False, ensure_ascii=True, indent=None, sort_keys=False)",
     "Serialize obj to a JSON formatted str. If indent is a non-negative integer or "
     "string, then JSON array elements and object members will be pretty-printed with "
     "that indent level. If sort_keys is true, the output of dictionaries will be "
     "sorted by key.", 10, ["skipkeys", "ensure_ascii"]),
    ("json", "function", None, "json.loads(s, *, cls=None, object_hook=None)",
     "Deserialize s (a str, bytes or bytearray instance containing a JSON document) "
     "to a Python object.", 4, ["cls", "object_hook"]),
    ("json", "function", None, "json.dump(obj, fp, *, indent=None)",
     "Serialize obj as a JSON formatted stream to fp (a .write()-supporting file-like "
     "object). The indent argument controls pretty printing.", 2, []),
    ("re", "function", None, "re.sub(pattern, repl, string, count=0, flags=0)",
     "Return the string obtained by replacing the leftmost non-overlapping occurrences "
     "of pattern in string by the replacement repl. If the pattern isn't found, string "
     "is returned unchanged. The optional argument count is the maximum number of "
     "pattern occurrences to be replaced.", 4, ["flags"]),
    ("re", "function", None, "re.compile(pattern, flags=0)",
     "Compile a regular expression pattern into a regular expression object. The "
     "expression's behaviour can be modified by specifying a flags value.", 2, []),
    ("re", "function", None, "re.findall(pattern, string, flags=0)",
     "Return all non-overlapping matches of pattern in string, as a list of strings.", 2,
     ["flags"]),
    ("re", "function", None, "re.split(pattern, string, maxsplit=0, flags=0)",
     "Split string by the occurrences of pattern. If maxsplit is nonzero, at most "
     "maxsplit splits occur.", 4, ["flags"]),
    ("datetime", "class", None,
     "datetime.timedelta(days=0, seconds=0, microseconds=0, milliseconds=0, minutes=0, "
     "hours=0, weeks=0)",
     "A timedelta object represents a duration, the difference between two dates or "
     "times. All arguments are optional and default to 0.", 10,
     ["days", "seconds", "microseconds", "milliseconds", "minutes", "hours", "weeks"]),
    ("collections", "class", None, "collections.Counter([iterable-or-mapping])",
     "A Counter is a dict subclass for counting hashable objects.", 0, []),
    ("collections", "class", None, "collections.OrderedDict([items])",
     "Return an instance of a dict subclass that has methods specialized for "
     "rearranging dictionary order.", 2, ["items"]),
    ("collections", "method", "OrderedDict", "popitem(last=True)",
     "The popitem() method for ordered dictionaries returns and removes a (key, value) "
     "pair. The pairs are returned in LIFO order if last is true or FIFO order if false.",
     2, []),
    ("collections", "method", "OrderedDict", "move_to_end(key, last=True)",
     "Move an existing key to either end of an ordered dictionary. The item is moved to "
     "the right end if last is true (the default) or to the beginning if last is false.",
     2, []),
    ("itertools", "function", None, "itertools.islice(iterable, start, stop[, step])",
     "Make an iterator that returns selected elements from the iterable. If start is "
     "non-zero, then elements from the iterable are skipped until start is reached.", 2,
     ["stop", "step"]),
    ("itertools", "function", None, "itertools.chain(*iterables)",
     "Make an iterator that returns elements from the first iterable until it is "
     "exhausted, then proceeds to the next iterable.", 1, []),
    ("itertools", "function", None, "itertools.combinations(iterable, r)",
     "Return r length subsequences of elements from the input iterable.", 1, []),
    ("itertools", "function", None, "itertools.groupby(iterable, key=None)",
     "Make an iterator that returns consecutive keys and groups from the iterable. The "
     "key is a function computing a key value for each element.", 2, []),
    ("itertools", "function", None, "itertools.count(start=0, step=1)",
     "Make an iterator that returns evenly spaced values starting with number start.", 4,
     ["step"]),
    ("functools", "function", None, "functools.reduce(function, iterable[, initializer])",
     "Apply function of two arguments cumulatively to the items of iterable, from left "
     "to right, so as to reduce the iterable to a single value. If the optional "
     "initializer is present, it is placed before the items of the iterable in the "
     "calculation.", 2, []),
    ("builtins", "function", None,
     "open(file, mode='r', buffering=-1, encoding=None, errors=None, newline=None, "
     "closefd=True, opener=None)",
     "Open file and return a corresponding file object. If the file cannot be opened, "
     "an OSError is raised. mode is an optional string that specifies the mode in "
     "which the file is opened. encoding is the name of the encoding used to decode or "
     "encode the file.", 10, ["buffering", "errors", "newline", "closefd", "opener"]),
    ("builtins", "function", None, "sorted(iterable, *, key=None, reverse=False)",
     "Return a new sorted list from the items in iterable. key specifies a function of "
     "one argument that is used to extract a comparison key from each element in "
     "iterable. reverse is a boolean value.", 4, []),
    ("builtins", "function", None, "range(start, stop[, step])",
     "Rather than being a function, range is actually an immutable sequence type.", 2,
     ["start", "stop", "step"]),
    ("builtins", "function", None, "zip(*iterables)",
     "Make an iterator that aggregates elements from each of the iterables.", 1, []),
    ("builtins", "function", None,
     "print(*objects, sep=' ', end='\\n', file=sys.stdout, flush=False)",
     "Print objects to the text stream file, separated by sep and followed by end. "
     "sep, end, file and flush, if present, must be given as keyword arguments.", 10, []),
    ("builtins", "method", "str", "str.join(iterable)",
     "Return a string which is the concatenation of the strings in iterable.", 1, []),
    ("builtins", "method", "str", "str.split(sep=None, maxsplit=-1)",
     "Return a list of the words in the string, using sep as the delimiter string. If "
     "maxsplit is given, at most maxsplit splits are done.", 4, []),
    ("builtins", "method", "str", "str.replace(old, new[, count])",
     "Return a copy of the string with all occurrences of substring old replaced by "
     "new. If the optional argument count is given, only the first count occurrences "
     "are replaced.", 2, []),
    ("builtins", "method", "dict", "get(key[, default])",
     "Return the value for key if key is in the dictionary, else default.", 2, []),
    ("shutil", "function", None, "shutil.copyfile(src, dst, *, follow_symlinks=True)",
     "Copy the contents (no metadata) of the file named src to a file named dst and "
     "return dst in the most efficient way possible.", 2, ["follow_symlinks"]),
    ("time", "function", None, "time.sleep(secs)",
     "Suspend execution of the calling thread for the given number of seconds.", 1,
     ["secs"]),
    ("decimal", "class", None, 'decimal.Decimal(value="0", context=None)',
     "Construct a new Decimal object based from value. The context precision does not "
     "affect how many digits are stored.", 4, []),
]

# CoNaLa-style records: (question_id, intent, rewritten_intent or None, snippet)
TRAIN = [
    (1, "How to get current directory", "get the current working directory", "os.getcwd()"),
    (2, "pick random element", "choose a random element from list `items`", "random.choice(items)"),
    (3, "list files", "list all files in directory `path`", "os.listdir(path)"),
    (4, "json dump dict", "serialize dictionary `d` to a JSON string", "json.dumps(d)"),
    (5, "json pretty", "serialize `data` to JSON with indent 4", "json.dumps(data, indent=4)"),
    (6, "parse json", "parse JSON string `s` into a python object", "json.loads(s)"),
    (7, "regex replace digits", "replace all digits in string `s` with empty string",
     "re.sub('\\\\d+', '', s)"),
    (8, "regex find words", "find all words in string `text`", "re.findall('\\\\w+', text)"),
    (9, "split by regex", "split string `s` on commas or semicolons", "re.split('[,;]', s)"),
    (10, "sort list desc", "sort list `l` in descending order", "sorted(l, reverse=True)"),
    (11, "sort by key", "sort list of tuples `l` by second element",
     "sorted(l, key=lambda x: x[1])"),
    (12, "open file write", "open a file `f.txt` in write mode", "f = open('f.txt', 'w')"),
    (13, "read file lines", "read all lines of file `fname`", "open(fname).readlines()"),
    (14, "join strings", "join list of strings `words` with spaces", "' '.join(words)"),
    (15, "split string", "split string `s` by whitespace", "s.split()"),
    (16, "replace substring", "replace 'a' with 'b' in string `s`", "s.replace('a', 'b')"),
    (17, "largest n", "get the 3 largest numbers from list `nums`", "heapq.nlargest(3, nums)"),
    (18, "smallest n", "get the 2 smallest items of `nums`", "heapq.nsmallest(2, nums)"),
    (19, "file exists", "check if file `fname` exists", "os.path.exists(fname)"),
    (20, "join paths", "join directory `d` and file name `f`", "os.path.join(d, f)"),
    (21, "make dirs", "create directory `path` including parents",
     "os.makedirs(path, exist_ok=True)"),
    (22, "remove file", "delete file `fname`", "os.remove(fname)"),
    (23, "sleep", "pause execution for 5 seconds", "time.sleep(5)"),
    (24, "copy file", "copy file `src` to `dst`", "shutil.copyfile(src, dst)"),
    (25, "random int", "generate a random integer between 1 and 10", "random.randint(1, 10)"),
    (26, "shuffle", "shuffle list `cards` in place", "random.shuffle(cards)"),
    (27, "random sample", "pick 3 unique random items from `population`",
     "random.sample(population, 3)"),
    (28, "deque max", "create a deque with maximum length 5", "d = collections.deque(maxlen=5)"),
    (29, "ordered dict", "create an empty ordered dictionary", "o = collections.OrderedDict()"),
    (30, "count chars", "count occurrences of each character in `s`", "collections.Counter(s)"),
    (31, "print no newline", "print `x` without a trailing newline", "print(x, end='')"),
    (32, "zip lists", "pair elements of lists `a` and `b`", "list(zip(a, b))"),
    (33, "chain lists", "flatten list of lists `ll`", "list(itertools.chain(*ll))"),
    (34, "range list", "list of even numbers below 10", "list(range(0, 10, 2))"),
    (35, "reduce sum", "multiply all numbers in list `nums`",
     "functools.reduce(lambda x, y: x * y, nums)"),
    (36, "splitext", "get the extension of file `fname`", "os.path.splitext(fname)[1]"),
    (37, "dict get default", "get value for key 'a' from dict `d` or 0", "d.get('a', 0)"),
    (38, "compile regex", "compile regex pattern for digits", "re.compile('\\\\d+')"),
    (39, "timedelta days", "a time span of 3 days", "datetime.timedelta(days=3)"),
    (40, "decimal", "convert string '1.5' to a decimal", "decimal.Decimal('1.5')"),
]
DEV = [
    (101, "current dir", "print the current working directory", "print(os.getcwd())"),
    (102, "random choice char", "pick a random character from string `s`", "random.choice(s)"),
    (103, "json file", "write object `obj` as JSON into file `fp`", "json.dump(obj, fp)"),
    (104, "upper", "convert string `s` to upper case", "s.upper()"),
    (105, "regex match", "find all numbers in `line`", "re.findall('[0-9]+', line)"),
    (106, "list dir sorted", "sorted list of files in `d`", "sorted(os.listdir(d))"),
    (107, "heap push", "push item `x` onto heap `h`", "heapq.heappush(h, x)"),
    (108, "sleep ms", "sleep for half a second", "time.sleep(0.5)"),
    (109, "split lines", "split string `s` into lines", "s.split('\\n')"),
    (110, "rotate deque", "rotate deque `d` right by 2", "d.rotate(2)"),
]
TEST = [
    (201, "random file", "choose a random file from the directory contents of the C drive, `C:\\\\`",
     "random.choice(os.listdir('C:\\\\'))"),
    (202, "open write", "Open a file \"f.txt\" in write mode.", "f = open('f.txt', 'w')"),
    (203, "clean text", "lower a string `text` and remove non-alphanumeric characters aside from space",
     "re.sub('[^\\\\sa-zA-Z0-9]', '', text).lower().strip()"),
    (204, "json string", "convert dict `d` to JSON with sorted keys", "json.dumps(d, sort_keys=True)"),
    (205, "largest", "get the largest 5 values in `scores`", "heapq.nlargest(5, scores)"),
    (206, "exists", "check whether path `p` exists", "os.path.exists(p)"),
    (207, "join", "join `parts` with commas", "','.join(parts)"),
    (208, "sort", "sort `names` alphabetically", "sorted(names)"),
    (209, "makedirs", "create nested directories `a/b/c`", "os.makedirs('a/b/c')"),
    (210, "loads", "decode JSON text `raw`", "json.loads(raw)"),
    (211, "getcwd", "store current working directory in `cwd`", "cwd = os.getcwd()"),
    (212, "randint", "random number between 0 and 100", "random.randint(0, 100)"),
    (213, "sleep", "wait 2 seconds", "time.sleep(2)"),
    (214, "findall", "extract all email-like tokens from `s`", "re.findall('\\\\S+@\\\\S+', s)"),
    (215, "copy", "copy `a.txt` to `b.txt`", "shutil.copyfile('a.txt', 'b.txt')"),
    (216, "deque", "make a deque from list `l`", "d = collections.deque(l)"),
    (217, "replace", "remove spaces from `s`", "s.replace(' ', '')"),
    (218, "sample", "draw 2 items from `pool` without replacement", "random.sample(pool, 2)"),
    (219, "splitext", "strip the extension from file name `fn`", "os.path.splitext(fn)[0]"),
    (220, "timedelta", "a duration of 90 minutes", "datetime.timedelta(minutes=90)"),
]
# Aligned with TEST; deliberately imperfect outputs.
HYPOTHESES = [
    "random.choice(os.path.expanduser('C:\\\\'))",
    "f = open('f.txt', 'f.txt')",
    "re.sub('[^\\\\sa-zA-Z0-9]', '', text)",
    "json.dumps(d, sort_keys=True)",
    "heapq.nlargest(5, scores)",
    "os.path.isfile(p)",
    "','.join(parts)",
    "sorted(names, reverse=True)",
    "os.makedirs('a/b/c')",
    "json.load(raw)",
    "cwd = os.getcwd()",
    "random.randint(1, 100)",
    "time.sleep(2)",
    "re.findall('\\\\S+', s)",
    "shutil.copy('a.txt', 'b.txt')",
    "d = collections.deque(l)",
    "s.strip()",
    "random.choice(pool)",
    "os.path.splitext(fn)[0]",
    "datetime.timedelta(hours=90)",
]

MINED_TEMPLATES = [
    ("how to get the current folder in python", "os.getcwd()"),
    ("python list directory contents", "os.listdir({v})"),
    ("random pick from list", "random.choice({v})"),
    ("convert dict to json string", "json.dumps({v})"),
    ("pretty print json", "print(json.dumps({v}, indent=2))"),
    ("parse json from string", "json.loads({v})"),
    ("regex substitute", "re.sub('{w}', '', {v})"),
    ("find all regex matches", "re.findall('{w}', {v})"),
    ("sort a list backwards", "sorted({v}, reverse=True)"),
    ("sort dictionary by value", "sorted({v}.items(), key=lambda x: x[1])"),
    ("open file for writing", "f = open('{w}.txt', 'w')"),
    ("check file exists", "os.path.exists({v})"),
    ("join path components", "os.path.join({v}, '{w}')"),
    ("join list into string", "', '.join({v})"),
    ("split string on comma", "{v}.split(',')"),
    ("python sleep", "time.sleep({n})"),
    ("random integer in range", "random.randint(0, {n})"),
    ("create directory if missing", "os.makedirs({v}, exist_ok=True)"),
    ("top n items", "heapq.nlargest({n}, {v})"),
    ("copy a file", "shutil.copyfile({v}, '{w}')"),
    ("flatten nested list", "list(itertools.chain.from_iterable({v}))"),
    ("count words", "collections.Counter({v}.split())"),
    ("replace text", "{v}.replace('{w}', '')"),
    ("shuffle a list", "random.shuffle({v})"),
    ("curses init", "stdscr = curses.initscr()"),
]
VARS = ["a", "b", "x", "lst", "data", "s", "text", "path", "items", "d"]
WORDS = ["foo", "bar", "abc", "tmp", "out", "log"]


def _conala(rows):
    out = []
    for qid, intent, rewritten, snippet in rows:
        out.append({"question_id": qid, "intent": intent, "rewritten_intent": rewritten,
                    "snippet": snippet})
    return out


def mined_records(n=400, seed=7):
    rng = random.Random(seed)
    recs = []
    for i in range(n):
        intent, tmpl = MINED_TEMPLATES[rng.randrange(len(MINED_TEMPLATES))]
        snippet = tmpl.format(v=rng.choice(VARS), w=rng.choice(WORDS), n=rng.randint(1, 9))
        recs.append({"id": f"m{i}", "question_id": 1000 + i,
                     "intent": f"{intent} ({i})", "snippet": snippet,
                     "prob": round(rng.random(), 6)})
    return recs


def main():
    with open(HERE / "doc_dump.jsonl", "w", encoding="utf-8") as fh:
        for module, kind, owner, sig, desc, _, _ in DOC_ENTRIES:
            fh.write(json.dumps({"module": module, "kind": kind, "owner_class": owner,
                                 "signature_text": sig, "description": desc}) + "\n")
    expected = [{"signature_text": e[3], "usages": e[5], "unmentioned": e[6]}
                for e in DOC_ENTRIES]
    (HERE / "doc_dump_expected.json").write_text(json.dumps(expected, indent=1) + "\n")
    for name, rows in (("conala-train.json", TRAIN), ("conala-dev.json", DEV),
                       ("conala-test.json", TEST)):
        (HERE / name).write_text(json.dumps(_conala(rows), indent=1) + "\n")
    with open(HERE / "conala-mined.jsonl", "w", encoding="utf-8") as fh:
        for rec in mined_records():
            fh.write(json.dumps(rec) + "\n")
    (HERE / "hypotheses.txt").write_text("".join(h + "\n" for h in HYPOTHESES))


if __name__ == "__main__":
    main()

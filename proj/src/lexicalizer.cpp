#include "semtext/lexicalizer.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "semtext/errors.hpp"
#include "semtext/util.hpp"

namespace semtext {

// ---------------------------------------------------------------------------
// Built-in tables
// ---------------------------------------------------------------------------

namespace {

// Block-delimiting tags to the word or phrase naming the construct; wording
// follows the HTML5 reference descriptions. Unmapped tags pass through as
// their literal name.
constexpr std::string_view kTagPhrases = R"(# tag	phrase
html	document
body	body
div	division
p	paragraph
h1	primary headline
h2	secondary headline
h3	tertiary headline
h4	quaternary headline
h5	quinary headline
h6	senary headline
ul	unordered list
ol	ordered list
li	list item
dl	description list
dt	description term
dd	description details
table	table
caption	table caption
tr	table row
td	table cell
th	header cell
blockquote	block quotation
pre	preformatted text
hr	thematic break
article	article
section	section
nav	navigation
aside	aside
header	header
footer	footer
main	main content
figure	figure
figcaption	figure caption
address	address
details	details
summary	summary
dialog	dialog
menu	menu
hgroup	heading group
dir	directory
center	center
)";

// Common class-name abbreviations to their full-word expansions.
constexpr std::string_view kAbbreviations = R"(# abbreviation	expansion
nav	navigation
hdr	header
ftr	footer
btn	button
img	image
pic	picture
thumb	thumbnail
msg	message
auth	author
ad	advertisement
ads	advertisement
advert	advertisement
bg	background
txt	text
desc	description
info	information
cfg	configuration
config	configuration
col	column
sec	section
cat	category
vid	video
aud	audio
doc	document
src	source
dest	destination
ref	reference
addr	address
attr	attribute
alt	alternative
cmt	comment
cta	call to action
err	error
fig	figure
ico	icon
lbl	label
lnk	link
loc	location
lst	list
max	maximum
min	minimum
mnu	menu
mod	module
num	number
org	organization
pg	page
pos	position
prev	previous
prod	product
promo	promotion
rel	related
req	required
resp	response
sb	sidebar
sel	selected
sep	separator
sig	signature
sm	small
tbl	table
tmp	temporary
tpl	template
ttl	title
ui	user interface
usr	user
util	utility
val	value
ver	version
wrp	wrapper
lg	large
md	medium
xs	extra small
xl	extra large
)";

constexpr std::string_view kStopwords = R"(i
me
my
myself
we
our
ours
ourselves
you
you're
you've
you'll
you'd
your
yours
yourself
yourselves
he
him
his
himself
she
she's
her
hers
herself
it
it's
its
itself
they
them
their
theirs
themselves
what
which
who
whom
this
that
that'll
these
those
am
is
are
was
were
be
been
being
have
has
had
having
do
does
did
doing
a
an
the
and
but
if
or
because
as
until
while
of
at
by
for
with
about
against
between
into
through
during
before
after
above
below
to
from
up
down
in
out
on
off
over
under
again
further
then
once
here
there
when
where
why
how
all
any
both
each
few
more
most
other
some
such
no
nor
not
only
own
same
so
than
too
very
s
t
can
will
just
don
don't
should
should've
now
d
ll
m
o
re
ve
y
ain
aren
aren't
couldn
couldn't
didn
didn't
doesn
doesn't
hadn
hadn't
hasn
hasn't
haven
haven't
isn
isn't
ma
mightn
mightn't
mustn
mustn't
needn
needn't
shan
shan't
shouldn
shouldn't
wasn
wasn't
weren
weren't
won
won't
wouldn
wouldn't
)";

std::string read_file_or_throw(const std::string& path, const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError(std::string("lexicalizer: cannot open ") + what + ": " +
                      path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// `term<TAB>expansion` rows; '#' lines are comments.
std::unordered_map<std::string, std::string> parse_phrase_table(
    std::string_view text, const char* what) {
    std::unordered_map<std::string, std::string> out;
    size_t pos = 0;
    int line_no = 0;
    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(
            pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        ++line_no;
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        if (line.empty() || line.front() == '#') continue;
        size_t tab = line.find('\t');
        if (tab == std::string_view::npos || tab == 0 ||
            tab + 1 >= line.size())
            throw FormatError(std::string("lexicalizer: bad ") + what +
                              " row at line " + std::to_string(line_no));
        out[ascii_lower(line.substr(0, tab))] =
            ascii_lower(line.substr(tab + 1));
    }
    return out;
}

std::unordered_set<std::string> parse_word_list(std::string_view text) {
    std::unordered_set<std::string> out;
    for (auto& w : split_whitespace(text)) out.insert(ascii_lower(w));
    return out;
}

}  // namespace

std::string_view Lexicalizer::builtin_tag_phrase_text() { return kTagPhrases; }
std::string_view Lexicalizer::builtin_abbreviation_text() {
    return kAbbreviations;
}
std::string_view Lexicalizer::builtin_stopword_text() { return kStopwords; }

Lexicalizer::Lexicalizer()
    : tag_phrases_(parse_phrase_table(kTagPhrases, "tag phrase")),
      abbreviations_(parse_phrase_table(kAbbreviations, "abbreviation")),
      stopwords_(parse_word_list(kStopwords)) {}

void Lexicalizer::set_max_words(size_t n) {
    if (n == 0) throw ConfigError("lexicalizer: max_words must be positive");
    max_words_ = n;
}

void Lexicalizer::load_tag_phrases(const std::string& path) {
    tag_phrases_ =
        parse_phrase_table(read_file_or_throw(path, "tag phrase table"),
                           "tag phrase");
}

void Lexicalizer::load_abbreviations(const std::string& path) {
    abbreviations_ =
        parse_phrase_table(read_file_or_throw(path, "abbreviation map"),
                           "abbreviation");
}

void Lexicalizer::load_stopwords(const std::string& path) {
    stopwords_ = parse_word_list(read_file_or_throw(path, "stopword list"));
}

bool Lexicalizer::is_stopword(std::string_view token) const {
    return stopwords_.count(std::string(token)) > 0;
}

// ---------------------------------------------------------------------------
// Tag words
// ---------------------------------------------------------------------------

std::vector<std::string> Lexicalizer::lexicalize_tags(
    const std::vector<std::string>& tag_seq) const {
    std::vector<std::string> out;
    for (const std::string& raw : tag_seq) {
        if (out.size() >= max_words_) break;
        std::string tag = ascii_lower(raw);
        auto it = tag_phrases_.find(tag);
        const std::string& phrase = it == tag_phrases_.end() ? tag : it->second;
        for (auto& token : split_whitespace(phrase)) {
            if (out.size() >= max_words_) break;
            if (is_stopword(token)) continue;
            out.push_back(std::move(token));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Class words
// ---------------------------------------------------------------------------

namespace {

bool is_delimiter(char c) {
    return c == '-' || c == '_' || c == '.' || c == '/' || c == ':';
}

bool pure_digits(const std::string& s) {
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return !s.empty();
}

// Splits one delimiter-free fragment at camel-case and letter/digit
// boundaries: "navBar2" -> nav, Bar, 2; "HTMLParser" -> HTML, Parser.
void split_camel(std::string_view s, std::vector<std::string>& out) {
    auto upper = [](char c) { return c >= 'A' && c <= 'Z'; };
    auto lower = [](char c) { return c >= 'a' && c <= 'z'; };
    auto digit = [](char c) { return c >= '0' && c <= '9'; };
    size_t start = 0;
    for (size_t i = 1; i < s.size(); ++i) {
        char prev = s[i - 1];
        char cur = s[i];
        bool boundary =
            (lower(prev) && upper(cur)) || (digit(prev) && !digit(cur)) ||
            (!digit(prev) && digit(cur)) ||
            (upper(prev) && upper(cur) && i + 1 < s.size() && lower(s[i + 1]));
        if (boundary) {
            out.emplace_back(s.substr(start, i - start));
            start = i;
        }
    }
    if (start < s.size()) out.emplace_back(s.substr(start));
}

}  // namespace

std::vector<std::string> Lexicalizer::lexicalize_classes(
    const std::vector<std::string>& class_seq) const {
    std::vector<std::string> out;
    for (const std::string& raw : class_seq) {
        if (out.size() >= max_words_) break;

        // delimiter split, then camel-case split
        std::vector<std::string> parts;
        size_t start = 0;
        for (size_t i = 0; i <= raw.size(); ++i) {
            if (i == raw.size() || is_delimiter(raw[i])) {
                if (i > start) split_camel({raw.data() + start, i - start},
                                           parts);
                start = i + 1;
            }
        }

        // lowercase, drop numbers, expand abbreviations
        std::vector<std::string> words;
        for (std::string& part : parts) {
            std::string low = ascii_lower(part);
            if (pure_digits(low)) continue;
            auto it = abbreviations_.find(low);
            if (it == abbreviations_.end()) {
                words.push_back(std::move(low));
            } else {
                for (auto& w : split_whitespace(it->second))
                    words.push_back(std::move(w));
            }
        }

        if (words.empty()) {
            // Unconvertible class name: kept as is, opaque to the stopword
            // list, so the identifier is not lost.
            out.push_back(ascii_lower(raw));
            continue;
        }
        for (auto& w : words) {
            if (out.size() >= max_words_) break;
            if (is_stopword(w)) continue;
            out.push_back(std::move(w));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Text words
// ---------------------------------------------------------------------------

std::vector<std::string> Lexicalizer::lexicalize_text(
    std::string_view text) const {
    std::vector<std::string> out;
    std::string token;
    size_t i = 0;
    auto take = [&]() {
        if (token.empty()) return;
        std::string low = ascii_lower(token);
        token.clear();
        if (out.size() < max_words_ && !is_stopword(low))
            out.push_back(std::move(low));
    };
    while (i < text.size()) {
        size_t start = i;
        uint32_t cp = 0;
        utf8_next(text, i, cp);
        if (is_word_cp(cp)) {
            token.append(text.substr(start, i - start));
        } else {
            take();
        }
        if (out.size() >= max_words_) return out;
    }
    take();
    return out;
}

WordStrings Lexicalizer::lexicalize(const TextBlock& block) const {
    WordStrings w;
    w.tag_words = lexicalize_tags(block.tag_seq);
    w.class_words = lexicalize_classes(block.class_seq);
    w.text_words = lexicalize_text(block.text);
    return w;
}

}  // namespace semtext

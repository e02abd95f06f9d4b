// Generated by tools/embed_data.py; do not edit.
#pragma once

#include <string_view>

namespace spgc::detail {

inline constexpr std::string_view kMarkersIni = R"spgc(# Boilerplate markers for Project Gutenberg plain-text files.
#
# Each non-comment line inside a list section is one marker. A raw line is
# matched when it begins with the marker, byte for byte and case-sensitively.
# Leading spaces in a marker are significant; lines starting with '#' and
# blank lines are ignored.
#
# Changing this file changes the "text" level of the corpus. Bump the version
# whenever a marker is added or removed.

[settings]
version = 1
header_scan_limit = 600
footer_min_lines = 100

[text_start]
*END*THE SMALL PRINT
*** START OF THE PROJECT GUTENBERG
*** START OF THIS PROJECT GUTENBERG
This etext was prepared by
E-text prepared by
Produced by
Distributed Proofreading Team
Proofreading Team at http://www.pgdp.net
http://gallica.bnf.fr)
      http://archive.org/details/
http://www.pgdp.net
by The Internet Archive)
by The Internet Archive/Canadian Libraries
by The Internet Archive/American Libraries
public domain material from the Internet Archive
Internet Archive)
Internet Archive/Canadian Libraries
Internet Archive/American Libraries
material from the Google Print project
*END THE SMALL PRINT
***START OF THE PROJECT GUTENBERG
This etext was produced by
*** START OF THE COPYRIGHTED
The Project Gutenberg
http://gutenberg.spiegel.de/ erreichbar.
Project Runeberg publishes
Beginning of this Project Gutenberg
Project Gutenberg Online Distributed
Gutenberg Online Distributed
the Project Gutenberg Online Distributed
Project Gutenberg TEI
This eBook was prepared by
http://gutenberg2000.de erreichbar.
This Etext was prepared by
This Project Gutenberg Etext was prepared by
Gutenberg Distributed Proofreaders
Project Gutenberg Distributed Proofreaders
the Project Gutenberg Online Distributed Proofreading Team
**The Project Gutenberg
*SMALL PRINT!
More information about this book is at the top of this file.
tells you about restrictions in how the file may be used.
l'authorization à les utilizer pour preparer ce texte.
of the etext through OCR.
*****These eBooks Were Prepared By Thousands of Volunteers!*****
We need your donations more than ever!
 *** START OF THIS PROJECT GUTENBERG
****     SMALL PRINT!
["Small Print" V.
      (http://www.ibiblio.org/gutenberg/
and the Project Gutenberg Online Distributed Proofreading Team
Mary Meehan, and the Project Gutenberg Online Distributed Proofreading
                this Project Gutenberg edition.

[text_end]
*** END OF THE PROJECT GUTENBERG
*** END OF THIS PROJECT GUTENBERG
***END OF THE PROJECT GUTENBERG
End of the Project Gutenberg
End of The Project Gutenberg
Ende dieses Project Gutenberg
by Project Gutenberg
End of Project Gutenberg
End of this Project Gutenberg
Ende dieses Projekt Gutenberg
        ***END OF THE PROJECT GUTENBERG
*** END OF THE COPYRIGHTED
End of this is COPYRIGHTED
Ende dieses Etextes 
Ende dieses Project Gutenber
Ende diese Project Gutenberg
**This is a COPYRIGHTED Project Gutenberg Etext, Details Above**
Fin de Project Gutenberg
The Project Gutenberg Etext of 
Ce document fut presente en lecture
Ce document fut présenté en lecture
More information about this book is at the top of this file.
We need your donations more than ever!
END OF PROJECT GUTENBERG
 End of the Project Gutenberg
 *** END OF THIS PROJECT GUTENBERG

[legalese_start]
<<THIS ELECTRONIC VERSION OF

[legalese_end]
SERVICE THAT CHARGES FOR DOWNLOAD
)spgc";

struct EmbeddedPunktTable {
  std::string_view language;
  std::string_view abbrev_types;
  std::string_view collocations;
  std::string_view sent_starters;
  std::string_view ortho_context;
};

inline constexpr EmbeddedPunktTable kPunktTables[] = {
    {"danish",
     R"spgc(aug
bl.a
ca
dec
dr
f.eks
feb
fr
frk
hr
jan
jf
kap
mht
nov
nr
okt
osv
prof
s
sept
st)spgc",
     R"spgc()spgc",
     R"spgc()spgc",
     R"spgc()spgc"},
    {"dutch",
     R"spgc(apr
aug
bijv
blz
ca
d.w.z
dec
dhr
dr
drs
e.d
enz
feb
ir
jan
m.a.w
mevr
mr
mrt
nov
o.a
okt
prof
sept
st)spgc",
     R"spgc()spgc",
     R"spgc()spgc",
     R"spgc()spgc"},
    {"english",
     R"spgc(a.m
approx
apr
aug
bros
capt
cf
ch
chap
co
col
corp
dec
dept
dr
e.g
ed
eds
esq
est
etc
feb
fig
fri
ft
gen
gov
hon
i.e
inc
jan
jr
jul
jun
lt
ltd
mar
messrs
mlle
mme
mon
mr
mrs
ms
mt
no
nov
oct
p
p.m
pp
pres
prof
rev
sat
sep
sept
sgt
sr
st
sun
thu
tue
u.k
u.s
viz
vol
vols
vs
wed)spgc",
     R"spgc()spgc",
     R"spgc()spgc",
     R"spgc()spgc"},
    {"finnish",
     R"spgc(elok
esim
heinäk
helmik
huhtik
huom
jne
jouluk
kesäk
kpl
ks
lokak
maalisk
marrask
mm
n
ns
prof
s
syysk
t.s
tammik
toim
toukok
tri
ts
v
vrt
yms)spgc",
     R"spgc()spgc",
     R"spgc()spgc",
     R"spgc()spgc"},
    {"french",
     R"spgc(apr
av
avr
cf
chap
dr
déc
etc
ex
févr
ibid
j.-c
janv
juil
m
me
mgr
mlle
mm
mme
n.-d
nov
oct
p
pp
sept
st
ste
vol
éd)spgc",
     R"spgc()spgc",
     R"spgc()spgc",
     R"spgc()spgc"},
    {"german",
     R"spgc(abs
apr
art
aug
bd
bzw
ca
d.h
dez
dr
evtl
feb
fr
geb
gest
ggf
hr
jan
jh
jhd
kap
märz
nov
nr
okt
prof
röm
s.o
s.u
sept
st
str
tel
u.a
usw
vgl
z.b)spgc",
     R"spgc()spgc",
     R"spgc()spgc",
     R"spgc()spgc"},
    {"italian",
     R"spgc(ago
apr
art
avv
cap
dic
dott
ecc
feb
gen
giu
ing
lug
mar
nov
on
ott
pag
pagg
prof
s
sett
sig
sig.na
sig.ra
sigg
ss
vol)spgc",
     R"spgc()spgc",
     R"spgc()spgc",
     R"spgc()spgc"},
    {"portuguese",
     R"spgc(abr
ago
art
av
cap
d
dez
dr
dra
etc
exma
exmo
fev
jan
jul
jun
mar
nov
out
prof
pág
págs
set
sr
sra
srs
v.ex
vol)spgc",
     R"spgc()spgc",
     R"spgc()spgc",
     R"spgc()spgc"},
    {"spanish",
     R"spgc(abr
ago
art
av
avda
cap
d
dic
dr
dra
dña
ee.uu
ej
ene
etc
feb
jul
jun
mar
nov
núm
oct
pág
págs
s.a
sept
sr
sra
sres
srta
ud
uds
vd
vds
vol)spgc",
     R"spgc()spgc",
     R"spgc()spgc",
     R"spgc()spgc"},
    {"swedish",
     R"spgc(aug
bl.a
ca
dec
dr
febr
fr
fru
hr
jan
jfr
kap
m.m
nov
nr
okt
osv
prof
s
s.k
sept
st
t.ex)spgc",
     R"spgc()spgc",
     R"spgc()spgc",
     R"spgc()spgc"},
};

}  // namespace spgc::detail

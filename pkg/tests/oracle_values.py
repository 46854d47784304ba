"""Reference values from tests/make_oracles.py (mpmath, 40 digits). Do not edit."""

F_POINTS = [(1e-10, 0.18185218492360244), (1e-08, 0.20018646128273265), (1e-06, 0.22933172653630482), (0.0001, 0.2828520863506831), (0.005, 0.38287071660296185), (0.0099, 0.4128493594661995), (0.0101, 0.4138236635479365), (0.02, 0.45120380622765077), (0.3, 0.7640833972751365), (1.0, 1.1176480777781732), (1.5707963267948966, 1.215267192986434), (2.0, 1.1593200450275514), (2.9, 0.7205784308003685), (3.131492653589793, 0.4138236635479365), (3.131692653589793, 0.41284935946619955), (3.1365926535897932, 0.38287071660296096), (3.141492653589793, 0.28285208635071785), (3.141591653589793, 0.22933172653745026)]
G_POINTS = [(1e-10, 0.08067002279300478), (1e-08, 0.09906652018292487), (1e-06, 0.12832631349229429), (0.0001, 0.1820890963424907), (0.005, 0.2825756463476775), (0.0099, 0.3126793749678463), (0.0101, 0.31365755149066976), (0.02, 0.35117570130623266), (0.3, 0.6639021438591761), (1.0, 1.0131068413388227), (1.5707963267948966, 1.1087342385152832), (2.0, 1.053966187660149), (2.9, 0.62060318522123), (3.131492653589793, 0.31365755149066976), (3.131692653589793, 0.3126793749678464), (3.1365926535897932, 0.2825756463476766), (3.141492653589793, 0.18208909634252565), (3.141591653589793, 0.12832631349344456)]
M_POINTS = [(1e-10, 0.7679878503154548), (1e-08, 0.7679878509540351), (1e-06, 0.7679879148120374), (0.0001, 0.7679943002572169), (0.005, 0.7683094705658636), (0.0099, 0.7686229278288719), (0.0101, 0.7686356857477694), (0.02, 0.7692636679121252), (0.3, 0.7844242550389956), (1.0, 0.8057520971699065), (1.5707963267948966, 0.8105694691387022), (2.0, 0.8078715969282697), (2.9, 0.781645250213127), (3.131492653589793, 0.7686356857477694), (3.131692653589793, 0.7686229278288719), (3.1365926535897932, 0.7683094705658636), (3.141492653589793, 0.7679943002572169), (3.141591653589793, 0.7679879148120374)]
K_POINTS = [(1e-10, -0.0880782102007774), (1e-08, -0.08511273866153916), (1e-06, -0.0804359833369658), (0.0001, -0.07196894689011078), (0.005, -0.05669809905697514), (0.0099, -0.05233113454860169), (0.0101, -0.052191285449597655), (0.02, -0.04693388962067021), (0.3, -0.011874679346292836), (1.0, 0.01824528302077248), (1.5707963267948966, 0.03672532574441968), (2.0, 0.051037031124729064), (2.9, 0.08829575496553926), (3.131492653589793, 0.10073989041913678), (3.131692653589793, 0.10075136753143003), (3.1365926535897932, 0.10103298068479703), (3.141492653589793, 0.10131541121405707), (3.141591653589793, 0.10132112591636114)]
H_POINTS = [(1e-10, 3.3333333333333335e-11), (1e-08, 3.3333333333333334e-09), (1e-06, 3.3333333333335554e-07), (0.0001, 3.3333333355555556e-05), (0.005, 0.0016666694444510582), (0.0099, 0.00330002156240127), (0.0101, 0.0033666895624668825), (0.02, 0.006666844451217202), (0.3, 0.10060518956750582), (1.0, 0.3579073840656693), (1.5707963267948966, 0.6366197723675813), (2.0, 0.9576575543602859), (2.9, 4.403180302762164)]
A = 1.215267192986434
B = 1.1087342385152832
ALPHA = {1: 0.23648105666712727, 2: 0.6635155790096244, 16: 7.565921442884655, 1024: 511.5484463550787}
BETA = {16: 0.8566176079014347, 1024: 0.893835661495398}
BETA_LIMIT = 0.8944524117925527
GAMMA = {16: 4.092328487690847, 1024: 4.4280355709798895}
GAMMA_LIMIT = 4.433632125223602
ALPHA_TILDE = {2: 1.1185527052714839, 16: 14.929349012124375, 1024: 1022.9016727002669}
BETA_TILDE = {16: 4.391947366758417, 1024: 4.759645387698538}
THM4_BETA = {16: 1.6854412487773176, 1024: 1.7822024576702629}
Q_ONE_PHI = 2.084495668559014
Q_ONE_PSI = 1.7570184807669416
BOUNDARY_ONE_SOUTH = 3.7038741039649326
IBP_COS = (2.7749940878503745, 0.8564653891423127, 1.9185286987080616)
IBP_P2 = (2.3283434163319323, 1.0408185772382872, 1.287524839093645)
NONATTAIN_ENERGY = {0.01: 3.21942024248661, 0.0001: 4.853459124616897, 1e-06: 5.922971284933666, 1e-08: 6.719396160777251}

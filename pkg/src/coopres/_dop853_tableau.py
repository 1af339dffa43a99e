"""Dormand-Prince 8(5,3) tableau with its 7th-order dense-output extension.

Coefficients as distributed with scipy.integrate (Hairer, Norsett & Wanner)."""

import numpy as np

N_STAGES = 12
N_STAGES_EXTENDED = 16
INTERPOLATOR_POWER = 7

C = np.array([0.                 , 0.05260015195876773, 0.0789002279381516 , 0.1183503419072274 ,
 0.2816496580927726 , 0.3333333333333333 , 0.25               , 0.3076923076923077 ,
 0.6512820512820513 , 0.6                , 0.8571428571428571 , 1.                 ])

A = np.array([[ 0.0000000000000000e+00,  0.0000000000000000e+00,  0.0000000000000000e+00,
   0.0000000000000000e+00,  0.0000000000000000e+00,  0.0000000000000000e+00,
   0.0000000000000000e+00,  0.0000000000000000e+00,  0.0000000000000000e+00,
   0.0000000000000000e+00,  0.0000000000000000e+00,  0.0000000000000000e+00],
 [ 5.2600151958767730e-02,  0.0000000000000000e+00,  0.0000000000000000e+00,
   0.0000000000000000e+00,  0.0000000000000000e+00,  0.0000000000000000e+00,
   0.0000000000000000e+00,  0.0000000000000000e+00,  0.0000000000000000e+00,
   0.0000000000000000e+00,  0.0000000000000000e+00,  0.0000000000000000e+00],
 [ 1.9725056984537900e-02,  5.9175170953613701e-02,  0.0000000000000000e+00,
   0.0000000000000000e+00,  0.0000000000000000e+00,  0.0000000000000000e+00,
   0.0000000000000000e+00,  0.0000000000000000e+00,  0.0000000000000000e+00,
   0.0000000000000000e+00,  0.0000000000000000e+00,  0.0000000000000000e+00],
 [ 2.9587585476806851e-02,  0.0000000000000000e+00,  8.8762756430420545e-02,
   0.0000000000000000e+00,  0.0000000000000000e+00,  0.0000000000000000e+00,
   0.0000000000000000e+00,  0.0000000000000000e+00,  0.0000000000000000e+00,
   0.0000000000000000e+00,  0.0000000000000000e+00,  0.0000000000000000e+00],
 [ 2.4136513415926669e-01,  0.0000000000000000e+00, -8.8454947932828609e-01,
   9.2483400326179199e-01,  0.0000000000000000e+00,  0.0000000000000000e+00,
   0.0000000000000000e+00,  0.0000000000000000e+00,  0.0000000000000000e+00,
   0.0000000000000000e+00,  0.0000000000000000e+00,  0.0000000000000000e+00],
 [ 3.7037037037037035e-02,  0.0000000000000000e+00,  0.0000000000000000e+00,
   1.7082860872947386e-01,  1.2546768756682242e-01,  0.0000000000000000e+00,
   0.0000000000000000e+00,  0.0000000000000000e+00,  0.0000000000000000e+00,
   0.0000000000000000e+00,  0.0000000000000000e+00,  0.0000000000000000e+00],
 [ 3.7109375000000000e-02,  0.0000000000000000e+00,  0.0000000000000000e+00,
   1.7025221101954405e-01,  6.0216538980455959e-02, -1.7578125000000000e-02,
   0.0000000000000000e+00,  0.0000000000000000e+00,  0.0000000000000000e+00,
   0.0000000000000000e+00,  0.0000000000000000e+00,  0.0000000000000000e+00],
 [ 3.7092000118504789e-02,  0.0000000000000000e+00,  0.0000000000000000e+00,
   1.7038392571223998e-01,  1.0726203044637328e-01, -1.5319437748624402e-02,
   8.2737891638140233e-03,  0.0000000000000000e+00,  0.0000000000000000e+00,
   0.0000000000000000e+00,  0.0000000000000000e+00,  0.0000000000000000e+00],
 [ 6.2411095871607569e-01,  0.0000000000000000e+00,  0.0000000000000000e+00,
  -3.3608926294469414e+00, -8.6821934684172597e-01,  2.7592099699446710e+01,
   2.0154067550477894e+01, -4.3489884181069961e+01,  0.0000000000000000e+00,
   0.0000000000000000e+00,  0.0000000000000000e+00,  0.0000000000000000e+00],
 [ 4.7766253643826434e-01,  0.0000000000000000e+00,  0.0000000000000000e+00,
  -2.4881146199716677e+00, -5.9029082683684297e-01,  2.1230051448181193e+01,
   1.5279233632882423e+01, -3.3288210968984863e+01, -2.0331201708508627e-02,
   0.0000000000000000e+00,  0.0000000000000000e+00,  0.0000000000000000e+00],
 [-9.3714243008598730e-01,  0.0000000000000000e+00,  0.0000000000000000e+00,
   5.1863724288440638e+00,  1.0914373489967295e+00, -8.1497870107469268e+00,
  -1.8520065659996959e+01,  2.2739487099350505e+01,  2.4936055526796523e+00,
  -3.0467644718982196e+00,  0.0000000000000000e+00,  0.0000000000000000e+00],
 [ 2.2733101475165380e+00,  0.0000000000000000e+00,  0.0000000000000000e+00,
  -1.0534495466737249e+01, -2.0008720582248625e+00, -1.7958931863118799e+01,
   2.7948884529419960e+01, -2.8589982771350235e+00, -8.8728569335306293e+00,
   1.2360567175794303e+01,  6.4339274601576357e-01,  0.0000000000000000e+00]])

B = np.array([ 0.054293734116568765,  0.                  ,  0.                  ,  0.                  ,
  0.                  ,  4.450312892752409   ,  1.8915178993145003  , -5.801203960010585   ,
  0.3111643669578199  , -0.1521609496625161  ,  0.20136540080403034 ,  0.04471061572777259 ])

E3 = np.array([-0.18980075407240762,  0.                 ,  0.                 ,  0.                 ,
  0.                 ,  4.450312892752409  ,  1.8915178993145003 , -5.801203960010585  ,
 -0.4226823213237919 , -0.1521609496625161 ,  0.20136540080403034,  0.02265179219836082,
  0.                 ])

E5 = np.array([ 0.01312004499419488 ,  0.                  ,  0.                  ,  0.                  ,
  0.                  , -1.2251564463762044  , -0.4957589496572502  ,  1.6643771824549864  ,
 -0.35032884874997366 ,  0.3341791187130175  ,  0.08192320648511571 , -0.022355307863886294,
  0.                  ])

C_EXTRA = np.array([0.1               , 0.2               , 0.7777777777777778])

A_EXTRA = np.array([[ 5.6167502283047954e-02,  0.0000000000000000e+00,  0.0000000000000000e+00,
   0.0000000000000000e+00,  0.0000000000000000e+00,  0.0000000000000000e+00,
   2.5350021021662483e-01, -2.4623903747080250e-01, -1.2419142326381637e-01,
   1.5329179827876568e-01,  8.2010522956346907e-03,  7.5678976605456994e-03,
  -8.2979999999999998e-03,  0.0000000000000000e+00,  0.0000000000000000e+00,
   0.0000000000000000e+00],
 [ 3.1834648163502142e-02,  0.0000000000000000e+00,  0.0000000000000000e+00,
   0.0000000000000000e+00,  0.0000000000000000e+00,  2.8300909672366776e-02,
   5.3541988307438566e-02, -5.4923748571390991e-02,  0.0000000000000000e+00,
   0.0000000000000000e+00, -1.0834732869724932e-04,  3.8257109083565839e-04,
  -3.4046500868740456e-04,  1.4131244367463250e-01,  0.0000000000000000e+00,
   0.0000000000000000e+00],
 [-4.2889630158379194e-01,  0.0000000000000000e+00,  0.0000000000000000e+00,
   0.0000000000000000e+00,  0.0000000000000000e+00, -4.6976214153611640e+00,
   7.6834211960625991e+00,  4.0689898183971103e+00,  3.5672718745528109e-01,
   0.0000000000000000e+00,  0.0000000000000000e+00,  0.0000000000000000e+00,
  -1.3990241651590145e-03,  2.9475147891527724e+00, -9.1509584721798696e+00,
   0.0000000000000000e+00]])

D = np.array([[-8.4289382761090135e+00,  0.0000000000000000e+00,  0.0000000000000000e+00,
   0.0000000000000000e+00,  0.0000000000000000e+00,  5.6671495351937773e-01,
  -3.0689499459498917e+00,  2.3846676565120699e+00,  2.1170345824450281e+00,
  -8.7139158377797299e-01,  2.2404374302607883e+00,  6.3157877876946877e-01,
  -8.8990336451333307e-02,  1.8148505520854727e+01, -9.1946323924783560e+00,
  -4.4360363875948936e+00],
 [ 1.0427508642579134e+01,  0.0000000000000000e+00,  0.0000000000000000e+00,
   0.0000000000000000e+00,  0.0000000000000000e+00,  2.4228349177525817e+02,
   1.6520045171727028e+02, -3.7454675472269020e+02, -2.2113666853125306e+01,
   7.7334326684722638e+00, -3.0674084731089398e+01, -9.3321305264302286e+00,
   1.5697238121770845e+01, -3.1139403219565178e+01, -9.3529243588444793e+00,
   3.5816841486394082e+01],
 [ 1.9985053242002433e+01,  0.0000000000000000e+00,  0.0000000000000000e+00,
   0.0000000000000000e+00,  0.0000000000000000e+00, -3.8703730874935178e+02,
  -1.8917813819516758e+02,  5.2780815920542364e+02, -1.1573902539959629e+01,
   6.8812326946963003e+00, -1.0006050966910838e+00,  7.7771377980534429e-01,
  -2.7782057523535082e+00, -6.0196695231264123e+01,  8.4320405506677162e+01,
   1.1992291136182789e+01],
 [-2.5693933462703750e+01,  0.0000000000000000e+00,  0.0000000000000000e+00,
   0.0000000000000000e+00,  0.0000000000000000e+00, -1.5418974869023643e+02,
  -2.3152937917604550e+02,  3.5763911791061412e+02,  9.3405324183624316e+01,
  -3.7458323136451632e+01,  1.0409964950896230e+02,  2.9840293426660502e+01,
  -4.3533456590011141e+01,  9.6324553959188279e+01, -3.9177261675615441e+01,
  -1.4972683625798564e+02]])


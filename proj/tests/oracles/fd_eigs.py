# Independent scipy build of the jump-corrected fourth-order operator, ell = 15, c = 1.5,
# half-length 45; prints the eigenvalue nearest the seed for h = 0.2 ... 0.025 and the observed orders.
import numpy as np, scipy.sparse as sp, scipy.sparse.linalg as sla
from math import factorial
def fornberg(z,x,m):
    n=len(x)-1; c=np.zeros((n+1,m+1)); c1=1.0; c4=x[0]-z; c[0,0]=1.0
    for i in range(1,n+1):
        mn=min(i,m); c2=1.0; c5=c4; c4=x[i]-z
        for j in range(i):
            c3=x[i]-x[j]; c2*=c3
            if j==i-1:
                for k in range(mn,0,-1): c[i,k]=c1*(k*c[i-1,k-1]-c5*c[i-1,k])/c2
                c[i,0]=-c1*c5*c[i-1,0]/c2
            for k in range(mn,0,-1): c[j,k]=(c4*c[j,k]-k*c[j,k-1])/c3
            c[j,0]=c4*c[j,0]/c3
        c1=c2
    return c
ell=15.0
W2=np.array([-1,16,-30,16,-1])/12.; W1=np.array([1,-8,0,8,-1])/12.
def build(h,c,H=45.0,npts=7):
    n=int(round(2*H/h))-1
    x=-H+h*np.arange(1,n+1)
    ifc=[int(round((x0+H)/h))-1 for x0 in (-ell,ell)]
    chi=np.where(np.abs(x)<ell,1.0,-1.0)
    # interface point belongs to left side
    chi[ifc[0]]=-1.0; chi[ifc[1]]=1.0
    e=np.ones(n)
    D2=sp.diags([-e[2:]/12,16*e[1:]/12,-30*e/12,16*e[1:]/12,-e[2:]/12],[-2,-1,0,1,2]).tolil()/h**2
    D1=sp.diags([e[2:]/12,-8*e[1:]/12,8*e[1:]/12,-e[2:]/12],[-2,-1,1,2]).tolil()/h
    D2=D2.tolil(); D1=D1.tolil()
    # linear functionals as row vectors (dense) for u0,u0',uL''
    A=(D2.copy()+sp.diags(chi)).tolil()
    Cd=[]  # store corrections to be applied later for outer
    outer_u=sp.lil_matrix((n,n)); outer_t=sp.lil_matrix((n,n))
    D1c=D1.copy()
    for q,i0 in enumerate(ifc):
        chiL=chi[i0]; chiR=-chiL; jc=chiR-chiL
        idx=np.arange(i0-npts+1,i0+1); z=(idx-i0)*h
        F=fornberg(0.0,z,2)
        f0=np.zeros(n); f0[i0]=1
        f1=np.zeros(n); f1[idx]=F[:,1]
        f2=np.zeros(n); f2[idx]=F[:,2]
        th0=f2+chiL*f0
        J=[None,None,-jc*f0,-jc*f1,-jc*th0+(chiR**2-chiL**2)*f0]  # jumps u^(m) m=2..4
        for i in range(i0-2,i0+3):
            for k in range(-2,3):
                j=i+k; xr=(j-i0)*h
                # J contribution: point j on other side of i
                if i<=i0 and j>i0: s=1.0
                elif i>i0 and j<i0: s=-1.0   # j==i0 is left side; for i>i0 right: u(x0) continuous and J(x0)=0 since m>=2
                else: continue
                for m in (2,3,4):
                    coef=s*xr**m/factorial(m)
                    A[i,:]=A[i,:]-(W2[k+2]/h**2)*coef*J[m]
                    if m<=3: D1c[i,:]=D1c[i,:]-(W1[k+2]/h)*coef*J[m]
                # outer theta jumps: [th''']=-c jc u0 ; [th'''']=-jc th''(x0)
                coef3=s*xr**3/6; coef4=s*xr**4/24
                outer_u[i,:]=outer_u[i,:]+(W2[k+2]/h**2)*coef3*(-c*jc*f0)
                # th''(x0) ~ central D2 of theta row i0 -> functional on theta
                g=np.zeros(n); g[i0-2:i0+3]=W2/h**2
                outer_t[i,:]=outer_t[i,:]+(W2[k+2]/h**2)*coef4*(-jc*g)
    A=A.tocsr(); D2=D2.tocsr()
    Bt=D2-outer_t.tocsr()
    M=-(Bt@A)+(outer_u.tocsr())+c*D1c.tocsr()
    return M.tocsc()
for c in [1.5]:
  seed=0.006+1.118j; res=[]
  for h in [0.2,0.1,0.05,0.025]:
    M=build(h,c).astype(complex)
    w=sla.eigs(M,k=1,sigma=seed,return_eigenvectors=False)[0]
    res.append(w); print(h,repr(w))
  r=np.array(res); d=np.abs(np.diff(r)); print('orders',np.log2(d[:-1]/d[1:]))
